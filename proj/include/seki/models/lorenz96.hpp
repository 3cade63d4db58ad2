#pragma once

#include <Eigen/Dense>
#include <vector>

#include "seki/eki.hpp"

namespace seki::models {

struct Lorenz96Spec {
    int n_state = 40;
    double forcing = 8.0;
    double dt = 0.01;
    double t_final = 0.5;
    std::vector<int> measured_wavenumbers;  // subset of {1, ..., n_state/2 - 1}
};

// Classical RK4 integration of dx_i/dt = (x_{i+1} - x_{i-2}) x_{i-1} - x_i + F
// with periodic indexing, from t = 0 to t_final in steps of dt.
Eigen::VectorXd lorenz96_rk4(const Eigen::VectorXd& x0, const Lorenz96Spec& spec);

// Selected Fourier coefficients of a periodic state: for each wavenumber w,
// (2/N) sum_i x_i cos(2 pi w i / N) and (2/N) sum_i x_i sin(2 pi w i / N).
Eigen::VectorXd fourier_measure(const Eigen::VectorXd& x,
                                const std::vector<int>& wavenumbers);

// Forward map: initial state -> partial Fourier measurement of x(t_final).
class Lorenz96Model : public ForwardModel {
public:
    explicit Lorenz96Model(Lorenz96Spec spec);
    Eigen::Index input_dim() const override { return spec_.n_state; }
    Eigen::Index output_dim() const override;
    Eigen::VectorXd evaluate(const Eigen::VectorXd& x0) const override;
    const Lorenz96Spec& spec() const { return spec_; }

private:
    Lorenz96Spec spec_;
};

}  // namespace seki::models
