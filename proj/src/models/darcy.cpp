#include "seki/models/darcy.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <string>
#include <vector>

#include "seki/errors.hpp"

namespace seki::models {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

}  // namespace

Eigen::VectorXd darcy_solve(const Eigen::VectorXd& log_k, const DarcyProblem& prob) {
    const int nx = prob.nx;
    const int ny = prob.ny;
    if (nx < 2 || ny < 2) throw StructuralError("darcy_solve: mesh too coarse");
    if (log_k.size() != static_cast<Eigen::Index>(nx) * ny) {
        throw StructuralError("darcy_solve: log_k size does not match mesh");
    }
    if (!log_k.allFinite()) {
        throw ArgumentError("darcy_solve: log_k has non-finite entries");
    }
    const double hx = 1.0 / nx;
    const double hy = 1.0 / ny;
    auto idx = [nx](int ix, int iy) { return iy * nx + ix; };
    auto cx = [hx](int ix) { return (ix + 0.5) * hx; };
    auto cy = [hy](int iy) { return (iy + 0.5) * hy; };

    Eigen::VectorXd k = log_k.array().exp();
    const Eigen::Index n = log_k.size();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(5 * n));
    Eigen::VectorXd rhs(n);

    // Accumulates the contribution of one boundary face of area `area` at
    // half-cell distance `half` from the center.
    auto boundary_face = [&](const BoundaryCondition& bc, int cell, double kc,
                             double area, double half, double bx, double by,
                             double& diag) {
        if (bc.type == BcType::dirichlet) {
            const double t = kc * area / half;
            diag += t;
            rhs(cell) += t * bc.value(bx, by);
        } else {
            // Outward flux density q.n prescribed: moves to the RHS.
            rhs(cell) -= area * bc.value(bx, by);
        }
    };

    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const int c = idx(ix, iy);
            const double kc = k(c);
            double diag = 0.0;
            rhs(c) = prob.source(cx(ix), cy(iy)) * hx * hy;

            if (ix > 0) {
                const double t = harmonic(kc, k(idx(ix - 1, iy))) * hy / hx;
                diag += t;
                trip.emplace_back(c, idx(ix - 1, iy), -t);
            } else {
                boundary_face(prob.left, c, kc, hy, hx / 2.0, 0.0, cy(iy), diag);
            }
            if (ix < nx - 1) {
                const double t = harmonic(kc, k(idx(ix + 1, iy))) * hy / hx;
                diag += t;
                trip.emplace_back(c, idx(ix + 1, iy), -t);
            } else {
                boundary_face(prob.right, c, kc, hy, hx / 2.0, 1.0, cy(iy), diag);
            }
            if (iy > 0) {
                const double t = harmonic(kc, k(idx(ix, iy - 1))) * hx / hy;
                diag += t;
                trip.emplace_back(c, idx(ix, iy - 1), -t);
            } else {
                boundary_face(prob.bottom, c, kc, hx, hy / 2.0, cx(ix), 0.0, diag);
            }
            if (iy < ny - 1) {
                const double t = harmonic(kc, k(idx(ix, iy + 1))) * hx / hy;
                diag += t;
                trip.emplace_back(c, idx(ix, iy + 1), -t);
            } else {
                boundary_face(prob.top, c, kc, hx, hy / 2.0, cx(ix), 1.0, diag);
            }
            trip.emplace_back(c, c, diag);
        }
    }

    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("darcy_solve: sparse Cholesky factorization failed");
    }
    Eigen::VectorXd p = solver.solve(rhs);
    const double rel = (a * p - rhs).norm() / std::max(rhs.norm(), 1e-300);
    if (!(rel <= 1e-10)) {
        throw NumericalError("darcy_solve: relative residual " +
                             std::to_string(rel) + " exceeds 1e-10");
    }
    return p;
}

DarcyProblem darcy_problem(const DarcySpec& spec) {
    DarcyProblem prob;
    prob.nx = spec.mesh;
    prob.ny = spec.mesh;
    prob.source = [](double, double x2) {
        if (x2 <= 4.0 / 6.0) return 0.0;
        if (x2 <= 5.0 / 6.0) return 137.0;
        return 274.0;
    };
    prob.bottom = {BcType::dirichlet, [](double, double) { return 100.0; }};
    // -k dp/dx1 = 500 at x1 = 0; outward normal is -x1 there, so the outward
    // flux density is -500 (inflow).
    prob.left = {BcType::neumann, [](double, double) { return -500.0; }};
    prob.right = {BcType::neumann, [](double, double) { return 0.0; }};
    prob.top = {BcType::neumann, [](double, double) { return 0.0; }};
    return prob;
}

Eigen::VectorXd darcy_observe(const Eigen::VectorXd& pressure, const DarcySpec& spec) {
    const int nx = spec.mesh;
    const int ny = spec.mesh;
    if (pressure.size() != static_cast<Eigen::Index>(nx) * ny) {
        throw StructuralError("darcy_observe: pressure size does not match mesh");
    }
    const int nobs = spec.obs_per_side;
    const double hx = 1.0 / nx;
    const double hy = 1.0 / ny;
    Eigen::VectorXd out(static_cast<Eigen::Index>(nobs) * nobs);
    Eigen::Index o = 0;
    for (int j = 1; j <= nobs; ++j) {
        const double y = static_cast<double>(j) / (nobs + 1);
        for (int i = 1; i <= nobs; ++i) {
            const double x = static_cast<double>(i) / (nobs + 1);
            // Bilinear interpolation on the cell-center lattice, clamped so
            // the stencil stays inside the grid.
            double fx = x / hx - 0.5;
            double fy = y / hy - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(nx - 1));
            fy = std::clamp(fy, 0.0, static_cast<double>(ny - 1));
            const int ix = std::min(static_cast<int>(fx), nx - 2);
            const int iy = std::min(static_cast<int>(fy), ny - 2);
            const double tx = fx - ix;
            const double ty = fy - iy;
            const double p00 = pressure(iy * nx + ix);
            const double p10 = pressure(iy * nx + ix + 1);
            const double p01 = pressure((iy + 1) * nx + ix);
            const double p11 = pressure((iy + 1) * nx + ix + 1);
            out(o++) = (1 - tx) * (1 - ty) * p00 + tx * (1 - ty) * p10 +
                       (1 - tx) * ty * p01 + tx * ty * p11;
        }
    }
    return out;
}

DarcyModel::DarcyModel(const DarcySpec& spec)
    : spec_(spec), problem_(darcy_problem(spec)) {
    if (spec.mesh < 4) throw StructuralError("DarcyModel: mesh too coarse");
    if (spec.obs_per_side < 1) throw StructuralError("DarcyModel: no observations");
}

Eigen::Index DarcyModel::input_dim() const {
    return static_cast<Eigen::Index>(spec_.mesh) * spec_.mesh;
}

Eigen::Index DarcyModel::output_dim() const {
    return static_cast<Eigen::Index>(spec_.obs_per_side) * spec_.obs_per_side;
}

Eigen::VectorXd DarcyModel::evaluate(const Eigen::VectorXd& log_k) const {
    return darcy_observe(darcy_solve(log_k, problem_), spec_);
}

}  // namespace seki::models
