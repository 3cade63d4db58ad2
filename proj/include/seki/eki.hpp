#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "seki/rng.hpp"
#include "seki/sec.hpp"

namespace seki {

// Black-box map G : R^N -> R^M. Implementations must be pure and safely
// callable from multiple threads at once.
class ForwardModel {
public:
    virtual ~ForwardModel() = default;
    virtual Eigen::Index input_dim() const = 0;
    virtual Eigen::Index output_dim() const = 0;
    virtual Eigen::VectorXd evaluate(const Eigen::VectorXd& u) const = 0;
};

// Measurement y with SPD noise covariance Gamma; owns the factor used for
// perturbation draws and Gamma-weighted norms.
class MeasurementModel {
public:
    MeasurementModel(Eigen::VectorXd y, Eigen::MatrixXd gamma, bool gamma_is_diagonal);

    // Diagonal Gamma convenience constructor.
    static MeasurementModel diagonal(Eigen::VectorXd y, Eigen::VectorXd gamma_diag);

    const Eigen::VectorXd& y() const { return y_; }
    const Eigen::MatrixXd& gamma() const { return gamma_; }
    bool gamma_is_diagonal() const { return diagonal_; }
    Eigen::Index dim() const { return y_.size(); }

    // Draws zeta ~ N(0, Gamma) through the cached symmetric factor.
    Eigen::VectorXd draw_noise(RngStream& rng) const;

    // ||r||_Gamma^2 = <r, Gamma^{-1} r>.
    double weighted_misfit(const Eigen::VectorXd& residual) const;

private:
    Eigen::VectorXd y_;
    Eigen::MatrixXd gamma_;
    bool diagonal_;
    Eigen::VectorXd sqrt_diag_;     // diagonal fast path
    Eigen::MatrixXd chol_factor_;   // dense path
};

struct RunConfig {
    int ensemble_size = 50;
    int n_iterations = 10;
    std::uint64_t rng_seed = 0;
    SecConfig sec;
    Eigen::VectorXd init_mean;
    Eigen::VectorXd init_variance;  // per-component, > 0
    int n_threads = 1;
};

// Ensemble stored column-wise: N rows, K member columns.
struct Ensemble {
    Eigen::MatrixXd members;
    int iteration_index = 0;

    Eigen::Index size() const { return members.cols(); }
    Eigen::Index dim() const { return members.rows(); }
};

struct IterationMetrics {
    int iteration = 0;
    Eigen::VectorXd estimate;
    double l1_error = 0.0;  // NaN when no truth supplied
    double data_misfit = 0.0;
    double wall_time_seconds = 0.0;
};

struct RunRecord {
    std::vector<IterationMetrics> iterations;
    Ensemble final_ensemble;

    const IterationMetrics& final() const { return iterations.back(); }
};

// K i.i.d. Gaussian draws, component j ~ N(init_mean_j, init_variance_j).
Ensemble init_ensemble(const RunConfig& cfg);

// Forward sweep g^(k) = G(u^(k)); parallel over members, assembled in member
// order. Aborts with the member index on a model failure.
Eigen::MatrixXd predict(const Ensemble& e, const ForwardModel& g, int n_threads = 1);

// One perturbed-observation Kalman analysis step with optional SEC.
// perturb_observations = false uses the unperturbed data for every member
// (deterministic analysis, used by diagnostics and worked examples).
Ensemble kalman_update(const Ensemble& e, const Eigen::MatrixXd& preds,
                       const MeasurementModel& m, const SecConfig& sec,
                       std::uint64_t rng_seed, bool perturb_observations = true);

// Full iteration loop; records the post-update ensemble mean per iteration.
// estimate_map (optional) maps the ensemble mean into the reporting space;
// misfit_fn (optional) overrides the misfit evaluation for the estimate.
struct RunHooks {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> estimate_map;
    std::function<double(const Eigen::VectorXd&)> misfit;
};

RunRecord run(const ForwardModel& g, const MeasurementModel& m,
              const RunConfig& cfg,
              const std::optional<Eigen::VectorXd>& truth = std::nullopt,
              const RunHooks& hooks = {});

// Same loop, starting from a caller-supplied ensemble.
RunRecord run_from(const ForwardModel& g, const MeasurementModel& m,
                   const RunConfig& cfg, Ensemble initial,
                   const std::optional<Eigen::VectorXd>& truth = std::nullopt,
                   const RunHooks& hooks = {});

// Per-member test of membership in the column span of the previous ensemble:
// relative projection residual <= tol.
std::vector<bool> spans_previous(const Ensemble& prev, const Ensemble& next, double tol);

// Relative projection residuals backing spans_previous.
Eigen::VectorXd span_residuals(const Ensemble& prev, const Ensemble& next);

}  // namespace seki
