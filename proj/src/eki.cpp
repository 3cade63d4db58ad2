#include "seki/eki.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <atomic>
#include <chrono>
#include <limits>
#include <cmath>
#include <iostream>
#include <string>
#include <thread>

#include "seki/errors.hpp"
#include "seki/stats.hpp"

namespace seki {

MeasurementModel::MeasurementModel(Eigen::VectorXd y, Eigen::MatrixXd gamma,
                                   bool gamma_is_diagonal)
    : y_(std::move(y)), gamma_(std::move(gamma)), diagonal_(gamma_is_diagonal) {
    if (gamma_.rows() != gamma_.cols() || gamma_.rows() != y_.size()) {
        throw StructuralError("MeasurementModel: gamma must be M x M");
    }
    if (diagonal_) {
        sqrt_diag_ = gamma_.diagonal();
        if ((sqrt_diag_.array() <= 0).any()) {
            throw ArgumentError("MeasurementModel: gamma diagonal must be positive");
        }
        sqrt_diag_ = sqrt_diag_.array().sqrt();
    } else {
        Eigen::LLT<Eigen::MatrixXd> llt(gamma_);
        if (llt.info() != Eigen::Success) {
            throw NumericalError("MeasurementModel: gamma is not positive definite");
        }
        chol_factor_ = llt.matrixL();
    }
}

MeasurementModel MeasurementModel::diagonal(Eigen::VectorXd y, Eigen::VectorXd gamma_diag) {
    if (gamma_diag.size() != y.size()) {
        throw StructuralError("MeasurementModel: diagonal size mismatch");
    }
    return MeasurementModel(std::move(y), Eigen::MatrixXd(gamma_diag.asDiagonal()), true);
}

Eigen::VectorXd MeasurementModel::draw_noise(RngStream& rng) const {
    Eigen::VectorXd z(dim());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    if (diagonal_) {
        return sqrt_diag_.cwiseProduct(z);
    }
    return chol_factor_ * z;
}

double MeasurementModel::weighted_misfit(const Eigen::VectorXd& residual) const {
    if (residual.size() != dim()) {
        throw StructuralError("weighted_misfit: residual dimension mismatch");
    }
    if (diagonal_) {
        return (residual.array().square() / gamma_.diagonal().array()).sum();
    }
    Eigen::VectorXd w = chol_factor_.triangularView<Eigen::Lower>().solve(residual);
    return w.squaredNorm();
}

Ensemble init_ensemble(const RunConfig& cfg) {
    if (cfg.ensemble_size < 2) {
        throw StructuralError("init_ensemble: ensemble size must be >= 2");
    }
    const Eigen::Index n = cfg.init_mean.size();
    if (cfg.init_variance.size() != n) {
        throw StructuralError("init_ensemble: mean/variance size mismatch");
    }
    if ((cfg.init_variance.array() <= 0).any()) {
        throw ArgumentError("init_ensemble: init_variance must be positive");
    }
    Eigen::VectorXd sd = cfg.init_variance.array().sqrt();
    Ensemble e;
    e.members.resize(n, cfg.ensemble_size);
    for (int k = 0; k < cfg.ensemble_size; ++k) {
        auto rng = make_stream(cfg.rng_seed, RngPhase::init_ensemble, 0, k);
        for (Eigen::Index j = 0; j < n; ++j) {
            e.members(j, k) = cfg.init_mean(j) + sd(j) * rng.normal();
        }
    }
    e.iteration_index = 0;
    return e;
}

Eigen::MatrixXd predict(const Ensemble& e, const ForwardModel& g, int n_threads) {
    if (e.dim() != g.input_dim()) {
        throw StructuralError("predict: ensemble dimension does not match model input");
    }
    const int k = static_cast<int>(e.size());
    Eigen::MatrixXd out(g.output_dim(), k);
    std::atomic<int> failed{-1};

    auto sweep = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            try {
                out.col(i) = g.evaluate(e.members.col(i));
            } catch (...) {
                int expected = -1;
                failed.compare_exchange_strong(expected, i);
                return;
            }
        }
    };

    const int workers = std::max(1, std::min(n_threads, k));
    if (workers == 1) {
        sweep(0, k);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (k + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(k, begin + chunk);
            if (begin < end) pool.emplace_back(sweep, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    if (failed.load() >= 0) {
        throw NumericalError("predict: forward model failed on member " +
                             std::to_string(failed.load()));
    }
    return out;
}

namespace {

// Factor c_gg_sec + gamma. The element-wise correction does not preserve
// positive semidefiniteness, so when the Cholesky factorization fails the
// spectrum is clipped at a small positive floor and the solve proceeds
// through the eigendecomposition instead.
Eigen::MatrixXd solve_gain_system(Eigen::MatrixXd a, const Eigen::MatrixXd& rhs) {
    try {
        return stats::spd_solve(a, rhs);
    } catch (const NumericalError&) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
        if (es.info() != Eigen::Success) {
            throw NumericalError("solve_gain_system: eigendecomposition failed");
        }
        const Eigen::VectorXd& ev = es.eigenvalues();
        const double floor = 1e-12 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
        std::cerr << "seki: gain matrix indefinite (min eigenvalue "
                  << ev.minCoeff() << "), clipping spectrum at " << floor << "\n";
        const Eigen::VectorXd inv = ev.cwiseMax(floor).cwiseInverse();
        return es.eigenvectors() *
               (inv.asDiagonal() * (es.eigenvectors().transpose() * rhs));
    }
}

}  // namespace

Ensemble kalman_update(const Ensemble& e, const Eigen::MatrixXd& preds,
                       const MeasurementModel& m, const SecConfig& sec_cfg,
                       std::uint64_t rng_seed, bool perturb_observations) {
    if (preds.cols() != e.size() || preds.rows() != m.dim()) {
        throw StructuralError("kalman_update: prediction dimensions inconsistent");
    }
    const int k = static_cast<int>(e.size());
    Eigen::MatrixXd c_ug = stats::cross_covariance(e.members, preds);
    Eigen::MatrixXd c_gg = stats::auto_covariance(preds);

    if (sec_cfg.active()) {
        Eigen::VectorXd sd_u = stats::component_stddev(e.members);
        Eigen::VectorXd sd_g = c_gg.diagonal().array().max(0.0).sqrt();
        auto [cu, cg] = sec::corrected_covariances(c_ug, c_gg, sd_u, sd_g, sec_cfg);

        // The element-wise correction does not preserve joint positive
        // semidefiniteness. An indefinite joint (u, g) covariance lets the
        // gain amplify innovations along directions that the corrected C^gg
        // no longer supports, which can blow the ensemble up when gamma is
        // small. Assemble the corrected joint covariance and, only when it is
        // indefinite, project it onto the PSD cone before taking the blocks;
        // a PSD joint matrix is used exactly as corrected.
        const Eigen::Index n = e.dim();
        const Eigen::Index md = m.dim();
        Eigen::MatrixXd c_uu = stats::auto_covariance(e.members);
        Eigen::MatrixXd r_uu =
            sec::correct_correlation_matrix(stats::corr_decompose(c_uu, sd_u, sd_u).r,
                                            sec_cfg.exponent_a);
        Eigen::MatrixXd joint(n + md, n + md);
        joint.topLeftCorner(n, n) =
            sd_u.asDiagonal() * r_uu * sd_u.asDiagonal();
        joint.topRightCorner(n, md) = cu;
        joint.bottomLeftCorner(md, n) = cu.transpose();
        joint.bottomRightCorner(md, md) = cg;

        // Cheap screen first: a pivoted LDLT flags indefiniteness at a third
        // of the cost of the eigendecomposition used for the projection.
        Eigen::LDLT<Eigen::MatrixXd> ldlt(joint);
        const Eigen::VectorXd d = ldlt.vectorD();
        const double screen_tol =
            1e-10 * std::max(1.0, d.cwiseAbs().maxCoeff());
        if (d.minCoeff() < -screen_tol) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(joint);
            if (es.info() == Eigen::Success) {
                const Eigen::VectorXd& ev = es.eigenvalues();
                const double tol = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
                if (ev.minCoeff() < -tol) {
                    const Eigen::VectorXd clipped = ev.cwiseMax(0.0);
                    joint = es.eigenvectors() * clipped.asDiagonal() *
                            es.eigenvectors().transpose();
                    cu = joint.topRightCorner(n, md);
                    cg = joint.bottomRightCorner(md, md);
                }
            }
        }
        c_ug = std::move(cu);
        c_gg = std::move(cg);
    }

    // Perturbed observations: one fresh stream per (iteration, member).
    Eigen::MatrixXd innovations(m.dim(), k);
    for (int j = 0; j < k; ++j) {
        innovations.col(j) = m.y() - preds.col(j);
        if (perturb_observations) {
            auto rng = make_stream(rng_seed, RngPhase::perturbed_observation,
                                   static_cast<std::uint64_t>(e.iteration_index) + 1, j);
            innovations.col(j) += m.draw_noise(rng);
        }
    }

    Eigen::MatrixXd a = c_gg + m.gamma();
    Eigen::MatrixXd solved = solve_gain_system(std::move(a), innovations);

    Ensemble out;
    out.members = e.members + c_ug * solved;
    out.iteration_index = e.iteration_index + 1;
    return out;
}

RunRecord run(const ForwardModel& g, const MeasurementModel& m,
              const RunConfig& cfg, const std::optional<Eigen::VectorXd>& truth,
              const RunHooks& hooks) {
    return run_from(g, m, cfg, init_ensemble(cfg), truth, hooks);
}

RunRecord run_from(const ForwardModel& g, const MeasurementModel& m,
                   const RunConfig& cfg, Ensemble e,
                   const std::optional<Eigen::VectorXd>& truth,
                   const RunHooks& hooks) {
    if (cfg.n_iterations < 1) {
        throw ConfigError("run: n_iterations must be >= 1");
    }
    RunRecord record;
    if (e.dim() != g.input_dim()) {
        throw StructuralError("run: ensemble dimension does not match model");
    }
    for (int n = 1; n <= cfg.n_iterations; ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        Eigen::MatrixXd preds = predict(e, g, cfg.n_threads);
        e = kalman_update(e, preds, m, cfg.sec, cfg.rng_seed);

        IterationMetrics it;
        it.iteration = n;
        Eigen::VectorXd mean = e.members.rowwise().mean();
        it.estimate = hooks.estimate_map ? hooks.estimate_map(mean) : mean;
        if (hooks.misfit) {
            it.data_misfit = hooks.misfit(it.estimate);
        } else {
            it.data_misfit = m.weighted_misfit(m.y() - g.evaluate(it.estimate));
        }
        it.l1_error = truth ? (it.estimate - *truth).lpNorm<1>()
                            : std::numeric_limits<double>::quiet_NaN();
        it.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        record.iterations.push_back(std::move(it));
    }
    record.final_ensemble = std::move(e);
    return record;
}

Eigen::VectorXd span_residuals(const Ensemble& prev, const Ensemble& next) {
    if (prev.dim() != next.dim() || prev.size() != next.size()) {
        throw StructuralError("span_residuals: ensemble shape mismatch");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(prev.members);
    const Eigen::Index rank = qr.rank();
    Eigen::MatrixXd q = qr.householderQ() *
                        Eigen::MatrixXd::Identity(prev.dim(), rank);
    Eigen::VectorXd res(next.size());
    for (Eigen::Index j = 0; j < next.size(); ++j) {
        const Eigen::VectorXd v = next.members.col(j);
        const Eigen::VectorXd proj = q * (q.transpose() * v);
        const double norm = std::max(v.norm(), 1e-300);
        res(j) = (v - proj).norm() / norm;
    }
    return res;
}

std::vector<bool> spans_previous(const Ensemble& prev, const Ensemble& next, double tol) {
    Eigen::VectorXd res = span_residuals(prev, next);
    std::vector<bool> in_span(res.size());
    for (Eigen::Index j = 0; j < res.size(); ++j) in_span[j] = res(j) <= tol;
    return in_span;
}

}  // namespace seki
