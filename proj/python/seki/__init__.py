"""Ensemble Kalman inversion with sampling error correction."""

try:
    from ._seki import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _seki import *  # noqa: F401,F403  (build-tree layout)
