#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "seki/eki.hpp"

namespace seki {

// lp penalty lambda * ||u||_p^p, realized through a change of variables that
// reduces the problem to Tikhonov form on an augmented measurement system.
struct RegularizationConfig {
    double p = 2.0;
    double lambda = 1.0;

    void validate() const;
};

namespace lp {

// Component-wise sgn(x) |x|^{p/2}, so that ||psi(u)||_2^2 = ||u||_p^p.
double psi(double x, double p);
Eigen::VectorXd psi(const Eigen::VectorXd& u, double p);

// Inverse transform, component-wise sgn(x) |x|^{2/p}; the 2/p exponent is
// what bounds p away from zero.
double xi(double x, double p);
Eigen::VectorXd xi(const Eigen::VectorXd& v, double p);

}  // namespace lp

// Augmented system: z = (y, 0), f(v) = (G(xi(v)), v),
// sigma = diag(Gamma, (1/lambda) I_N). One inner G call per f call.
struct AugmentedProblem {
    std::shared_ptr<ForwardModel> f;
    MeasurementModel measurement;  // z with covariance sigma
    double p;
};

AugmentedProblem augment(std::shared_ptr<const ForwardModel> g,
                         const MeasurementModel& m,
                         const RegularizationConfig& reg);

// Runs the EKI engine on the augmented problem; the v-ensemble is drawn in
// u-space per cfg and mapped through psi. Estimates and metrics are reported
// in u-space: u_n = xi(v_mean_n), misfit against the original (g, m).
RunRecord lp_run(std::shared_ptr<const ForwardModel> g, const MeasurementModel& m,
                 const RegularizationConfig& reg, const RunConfig& cfg,
                 const std::optional<Eigen::VectorXd>& truth = std::nullopt);

}  // namespace seki
