import json
import math

import numpy as np
import seki


def test_psi_xi_round_trip():
    u = np.linspace(-3.0, 3.0, 25)
    for p in (0.7, 1.0, 1.5, 2.0):
        v = seki.psi(u, p)
        assert np.allclose(seki.xi(v, p), u, atol=1e-12)


def test_correlation_shrinkage():
    r = np.array([[1.0, -0.5], [-0.5, 1.0]])
    out = seki.correct_correlation_matrix(r, 1.0)
    assert out[0, 0] == 1.0
    assert out[0, 1] == -0.25


def test_kalman_update_shapes_and_determinism():
    rng = np.random.default_rng(0)
    members = rng.normal(size=(6, 10))
    preds = members[:2, :].copy()
    y = np.array([1.0, -1.0])
    gamma = np.array([0.5, 0.5])
    a = seki.kalman_update(members, preds, y, gamma, a=1.0, seed=3)
    b = seki.kalman_update(members, preds, y, gamma, a=1.0, seed=3)
    assert a.shape == (6, 10)
    assert np.array_equal(a, b)


def test_subspace_diagnostic():
    assert seki.subspace_max_residual(0.0) < 1e-10
    assert seki.subspace_max_residual(1.0) > 0.01


def test_sampling_stddev():
    s = seki.correlation_sampling_stddev(0.0, 40, 20000, seed=1)
    assert abs(s - 1.0 / math.sqrt(39)) < 0.01


def test_presets_and_toy_run():
    assert "toy" in seki.presets()
    cfg = {
        "experiment": "toy",
        "model": {"n": 12},
        "init": {"mean": 0.0},
        "truth": {"values": [1.0] * 12},
        "run": {"ensemble_size": 20, "n_iterations": 8},
    }
    out = seki.run_json(json.dumps(cfg))
    assert len(out["iteration"]) == 8
    assert out["l1_error"][-1] < out["l1_error"][0]
    assert np.allclose(out["estimate"], out["truth"], atol=0.5)
