#include "seki/models/lorenz96.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "seki/errors.hpp"

namespace seki::models {

namespace {

Eigen::VectorXd tendency(const Eigen::VectorXd& x, double forcing) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd dx(n);
    for (int i = 0; i < n; ++i) {
        const int ip1 = (i + 1) % n;
        const int im1 = (i - 1 + n) % n;
        const int im2 = (i - 2 + n) % n;
        dx(i) = (x(ip1) - x(im2)) * x(im1) - x(i) + forcing;
    }
    return dx;
}

}  // namespace

Eigen::VectorXd lorenz96_rk4(const Eigen::VectorXd& x0, const Lorenz96Spec& spec) {
    if (x0.size() != spec.n_state) {
        throw StructuralError("lorenz96_rk4: state dimension mismatch");
    }
    const long steps = std::lround(spec.t_final / spec.dt);
    if (steps < 1 || std::abs(steps * spec.dt - spec.t_final) > 1e-12) {
        throw ArgumentError("lorenz96_rk4: t_final must be an exact multiple of dt");
    }
    Eigen::VectorXd x = x0;
    const double h = spec.dt;
    for (long s = 0; s < steps; ++s) {
        Eigen::VectorXd k1 = tendency(x, spec.forcing);
        Eigen::VectorXd k2 = tendency(x + 0.5 * h * k1, spec.forcing);
        Eigen::VectorXd k3 = tendency(x + 0.5 * h * k2, spec.forcing);
        Eigen::VectorXd k4 = tendency(x + h * k3, spec.forcing);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite()) {
            throw NumericalError("lorenz96_rk4: state blew up at step " +
                                 std::to_string(s + 1));
        }
    }
    return x;
}

Eigen::VectorXd fourier_measure(const Eigen::VectorXd& x,
                                const std::vector<int>& wavenumbers) {
    const int n = static_cast<int>(x.size());
    for (int w : wavenumbers) {
        if (w < 1 || w >= n / 2) {
            throw ArgumentError("fourier_measure: wavenumber " + std::to_string(w) +
                                " out of range [1, " + std::to_string(n / 2 - 1) + "]");
        }
    }
    Eigen::VectorXd out(2 * static_cast<Eigen::Index>(wavenumbers.size()));
    Eigen::Index idx = 0;
    for (int w : wavenumbers) {
        double c = 0.0;
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double angle = 2.0 * std::numbers::pi * w * i / n;
            c += x(i) * std::cos(angle);
            s += x(i) * std::sin(angle);
        }
        out(idx++) = 2.0 * c / n;
        out(idx++) = 2.0 * s / n;
    }
    return out;
}

Lorenz96Model::Lorenz96Model(Lorenz96Spec spec) : spec_(std::move(spec)) {
    if (spec_.n_state < 4) {
        throw StructuralError("Lorenz96Model: need at least 4 state components");
    }
    if (spec_.measured_wavenumbers.empty()) {
        throw StructuralError("Lorenz96Model: no measured wavenumbers");
    }
}

Eigen::Index Lorenz96Model::output_dim() const {
    return 2 * static_cast<Eigen::Index>(spec_.measured_wavenumbers.size());
}

Eigen::VectorXd Lorenz96Model::evaluate(const Eigen::VectorXd& x0) const {
    return fourier_measure(lorenz96_rk4(x0, spec_), spec_.measured_wavenumbers);
}

}  // namespace seki::models
