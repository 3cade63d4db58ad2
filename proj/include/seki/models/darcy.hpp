#pragma once

#include <Eigen/Dense>
#include <functional>

#include "seki/eki.hpp"

namespace seki::models {

enum class BcType { dirichlet, neumann };

// Dirichlet: prescribed pressure on the side. Neumann: prescribed outward
// normal flux density (-k grad p) . n.
struct BoundaryCondition {
    BcType type = BcType::neumann;
    std::function<double(double, double)> value;  // (x1, x2) on the boundary
};

// -div(k grad p) = f on (0,1)^2, cell-centered finite volumes with harmonic
// averaging of k at faces. Cells are indexed row-major by iy * nx + ix with
// centers ((ix + 0.5) h, (iy + 0.5) h).
struct DarcyProblem {
    int nx = 50;
    int ny = 50;
    std::function<double(double, double)> source;
    BoundaryCondition left, right, bottom, top;
};

// Solves the elliptic BVP for permeability k = exp(log_k); returns cell
// pressures. Direct sparse Cholesky; throws NumericalError if the relative
// residual exceeds 1e-10.
Eigen::VectorXd darcy_solve(const Eigen::VectorXd& log_k, const DarcyProblem& prob);

// Benchmark preset: banded source {0, 137, 274}, p = 100 on the bottom,
// influx 500 on the left, zero flux on the right and top.
struct DarcySpec {
    int mesh = 50;           // cells per side; unknown dimension mesh^2
    int obs_per_side = 20;   // observation lattice is obs_per_side^2 points
};

DarcyProblem darcy_problem(const DarcySpec& spec);

// Bilinear interpolation of cell pressures at the uniform interior lattice
// x = i / (obs_per_side + 1), i = 1..obs_per_side (each coordinate).
Eigen::VectorXd darcy_observe(const Eigen::VectorXd& pressure, const DarcySpec& spec);

// Forward map: log-permeability field -> observed pressures.
class DarcyModel : public ForwardModel {
public:
    explicit DarcyModel(const DarcySpec& spec);
    Eigen::Index input_dim() const override;
    Eigen::Index output_dim() const override;
    Eigen::VectorXd evaluate(const Eigen::VectorXd& log_k) const override;
    const DarcySpec& spec() const { return spec_; }

private:
    DarcySpec spec_;
    DarcyProblem problem_;
};

}  // namespace seki::models
