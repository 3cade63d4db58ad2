#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seki/eki.hpp"
#include "seki/errors.hpp"
#include "seki/harness/config.hpp"
#include "seki/harness/diagnostics.hpp"
#include "seki/harness/experiment.hpp"
#include "seki/harness/presets.hpp"
#include "seki/lp.hpp"
#include "seki/sec.hpp"

namespace py = pybind11;
using namespace seki;

namespace {

py::dict record_to_dict(const RunRecord& rec) {
    py::list iterations, l1, misfit;
    for (const auto& it : rec.iterations) {
        iterations.append(it.iteration);
        l1.append(it.l1_error);
        misfit.append(it.data_misfit);
    }
    py::dict out;
    out["iteration"] = iterations;
    out["l1_error"] = l1;
    out["data_misfit"] = misfit;
    out["estimate"] = rec.final().estimate;
    return out;
}

py::dict run_json(const std::string& json_text) {
    harness::ExperimentConfig cfg = harness::parse_config(json_text);
    harness::ExperimentSetup setup = harness::build_experiment(cfg);
    RunRecord rec =
        cfg.reg ? lp_run(setup.model, *setup.measurement, *cfg.reg, setup.run,
                         setup.truth)
                : run(*setup.model, *setup.measurement, setup.run, setup.truth);
    py::dict out = record_to_dict(rec);
    out["truth"] = setup.truth;
    return out;
}

py::dict setup_json(const std::string& json_text) {
    harness::ExperimentConfig cfg = harness::parse_config(json_text);
    harness::ExperimentSetup setup = harness::build_experiment(cfg);
    py::dict out;
    out["truth"] = setup.truth;
    out["y"] = setup.measurement->y();
    out["gamma_diag"] = Eigen::VectorXd(setup.measurement->gamma().diagonal());
    out["init_mean"] = setup.run.init_mean;
    out["init_variance"] = setup.run.init_variance;
    return out;
}

Eigen::MatrixXd forward_eval(const std::string& json_text,
                             const Eigen::MatrixXd& members, int n_threads) {
    harness::ExperimentConfig cfg = harness::parse_config(json_text);
    harness::ExperimentSetup setup = harness::build_experiment(cfg);
    if (members.rows() != setup.model->input_dim()) {
        throw StructuralError("forward_eval: member dimension mismatch");
    }
    Ensemble e;
    e.members = members;
    return predict(e, *setup.model, n_threads);
}

Eigen::MatrixXd kalman_update_py(const Eigen::MatrixXd& members,
                                 const Eigen::MatrixXd& preds,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& gamma_diag, double a,
                                 std::uint64_t seed, bool perturb) {
    Ensemble e;
    e.members = members;
    MeasurementModel m = MeasurementModel::diagonal(y, gamma_diag);
    SecConfig sec{a > 0.0, a};
    return kalman_update(e, preds, m, sec, seed, perturb).members;
}

}  // namespace

PYBIND11_MODULE(_seki, m) {
    m.doc() = "ensemble Kalman inversion with sampling error correction";

    m.def("psi", py::overload_cast<const Eigen::VectorXd&, double>(&lp::psi),
          py::arg("u"), py::arg("p"),
          "component-wise sgn(x) |x|^(p/2)");
    m.def("xi", py::overload_cast<const Eigen::VectorXd&, double>(&lp::xi),
          py::arg("v"), py::arg("p"),
          "inverse of psi, component-wise sgn(x) |x|^(2/p)");
    m.def("correct_correlation_matrix", &sec::correct_correlation_matrix,
          py::arg("r"), py::arg("a"),
          "element-wise r -> sgn(r) |r|^(a+1)");
    m.def("kalman_update", &kalman_update_py, py::arg("members"),
          py::arg("preds"), py::arg("y"), py::arg("gamma_diag"), py::arg("a"),
          py::arg("seed") = 0, py::arg("perturb") = true,
          "one analysis step on a column-wise ensemble");
    m.def("correlation_sampling_stddev", &harness::correlation_sampling_stddev,
          py::arg("true_r"), py::arg("k"), py::arg("n_trials"),
          py::arg("seed") = 0,
          "Monte Carlo stddev of the size-K sample correlation");
    m.def(
        "subspace_max_residual",
        [](double a) { return harness::subspace_violation_example(a).max_residual; },
        py::arg("a"),
        "worst projection residual of the R^4 worked example after one update");
    m.def("presets", &harness::preset_names, "available experiment presets");
    m.def("setup_json", &setup_json, py::arg("json_text"),
          "materialize an experiment config: truth, data, noise, prior");
    m.def("forward_eval", &forward_eval, py::arg("json_text"),
          py::arg("members"), py::arg("n_threads") = 1,
          "evaluate the configured forward model on ensemble columns");
    m.def("run_json", &run_json, py::arg("json_text"),
          "run an experiment from a JSON config string; returns metrics, the "
          "final estimate and the truth");
}
