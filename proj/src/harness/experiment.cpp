#include "seki/harness/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <utility>

#include "seki/errors.hpp"
#include "seki/models/blur.hpp"
#include "seki/models/image.hpp"
#include "seki/models/linear.hpp"
#include "seki/rng.hpp"

namespace seki::harness {

namespace fs = std::filesystem;

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::toy: return "toy";
        case ExperimentKind::compressive_sensing: return "compressive_sensing";
        case ExperimentKind::deblurring: return "deblurring";
        case ExperimentKind::lorenz96: return "lorenz96";
        case ExperimentKind::darcy: return "darcy";
        case ExperimentKind::custom: return "custom";
    }
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string& name) {
    if (name == "toy") return ExperimentKind::toy;
    if (name == "compressive_sensing") return ExperimentKind::compressive_sensing;
    if (name == "deblurring") return ExperimentKind::deblurring;
    if (name == "lorenz96") return ExperimentKind::lorenz96;
    if (name == "darcy") return ExperimentKind::darcy;
    if (name == "custom") return ExperimentKind::custom;
    throw ConfigError("unknown experiment \"" + name + "\"");
}

void ExperimentConfig::validate() const {
    if (run.ensemble_size < 2) {
        throw ConfigError("run.ensemble_size must be >= 2");
    }
    if (run.n_iterations < 1) {
        throw ConfigError("run.n_iterations must be >= 1");
    }
    if (!(obs_variance > 0.0)) {
        throw ConfigError("obs_variance must be positive");
    }
    if (!(init.variance > 0.0)) {
        throw ConfigError("init.variance must be positive");
    }
    if (run.sec.exponent_a < 0.0) {
        throw ConfigError("run.sec.exponent_a must be nonnegative");
    }
    const bool underdetermined = experiment == ExperimentKind::compressive_sensing ||
                                 experiment == ExperimentKind::lorenz96 ||
                                 experiment == ExperimentKind::darcy;
    if (underdetermined && !reg) {
        throw ConfigError("experiment \"" + to_string(experiment) +
                          "\" is underdetermined (M < N) and requires reg");
    }
    if (reg) reg->validate();
}

Eigen::VectorXd synthetic_image(int height, int width) {
    Eigen::VectorXd img = Eigen::VectorXd::Constant(
        static_cast<Eigen::Index>(height) * width, 0.15);
    const double cy = 0.38 * height;
    const double cx = 0.40 * width;
    const double rad = 0.22 * std::min(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            double v = 0.15;
            // bright rectangle in the lower-right quadrant
            if (r >= 0.55 * height && r < 0.85 * height && c >= 0.5 * width &&
                c < 0.9 * width) {
                v = 0.85;
            }
            // mid-gray disk
            const double d = std::hypot(r - cy, c - cx);
            if (d < rad) v = 0.55;
            // thin dark stripe
            if (c >= 0.1 * width && c < 0.15 * width) v = 0.0;
            img(r * width + c) = v;
        }
    }
    return img;
}

namespace {

Eigen::VectorXd load_vector_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open vector file " + path);
    std::vector<double> vals;
    double v;
    while (in >> v) vals.push_back(v);
    if (vals.empty()) throw IoError("empty vector file " + path);
    return Eigen::Map<Eigen::VectorXd>(vals.data(),
                                       static_cast<Eigen::Index>(vals.size()));
}

Eigen::VectorXd sparse_truth(int n, int nonzeros, std::uint64_t seed) {
    if (nonzeros < 1 || nonzeros > n) {
        throw ConfigError("truth.nonzeros out of range");
    }
    auto rng = make_stream(seed, RngPhase::truth_generation);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    std::vector<int> positions;
    while (static_cast<int>(positions.size()) < nonzeros) {
        const int p = static_cast<int>(rng.next_u64() % n);
        bool fresh = true;
        for (int q : positions) fresh = fresh && q != p;
        if (fresh) positions.push_back(p);
    }
    // The last component is minor, of order 0.1; the rest are order one.
    for (int i = 0; i < nonzeros; ++i) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double mag = i + 1 < nonzeros ? 1.0 + rng.uniform()
                                            : 0.1 * (0.8 + 0.4 * rng.uniform());
        u(positions[i]) = sign * mag;
    }
    return u;
}

Eigen::VectorXd lorenz_truth(const models::Lorenz96Spec& spec, std::uint64_t seed) {
    // Spin up from the perturbed equilibrium so the truth lies on the
    // attractor.
    auto rng = make_stream(seed, RngPhase::truth_generation);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(spec.n_state, spec.forcing);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += 0.5 * rng.normal();
    models::Lorenz96Spec spinup = spec;
    spinup.t_final = 2.0;
    return models::lorenz96_rk4(x, spinup);
}

Eigen::VectorXd darcy_truth(const models::DarcySpec& spec) {
    // Square log-permeability inclusion of value 1 on background 0.
    const int n = spec.mesh;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * n);
    const double h = 1.0 / n;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double x = (ix + 0.5) * h;
            const double y = (iy + 0.5) * h;
            if (x > 0.3 && x < 0.7 && y > 0.3 && y < 0.7) {
                u(iy * n + ix) = 1.0;
            }
        }
    }
    return u;
}

Eigen::VectorXd build_truth(const ExperimentConfig& cfg, Eigen::Index n) {
    switch (cfg.truth.kind) {
        case TruthSource::Kind::inline_vector:
            if (cfg.truth.values.size() != n) {
                throw ConfigError("truth.values has dimension " +
                                  std::to_string(cfg.truth.values.size()) +
                                  ", expected " + std::to_string(n));
            }
            return cfg.truth.values;
        case TruthSource::Kind::file: {
            if (cfg.experiment == ExperimentKind::deblurring &&
                cfg.truth.path.ends_with(".pgm")) {
                auto img = models::load_pgm(cfg.truth.path);
                if (img.height != cfg.model.image_height ||
                    img.width != cfg.model.image_width) {
                    throw ConfigError("truth image size does not match model");
                }
                return img.pixels;
            }
            Eigen::VectorXd v = load_vector_csv(cfg.truth.path);
            if (v.size() != n) {
                throw ConfigError("truth file has dimension " +
                                  std::to_string(v.size()) + ", expected " +
                                  std::to_string(n));
            }
            return v;
        }
        case TruthSource::Kind::generated:
            break;
    }
    switch (cfg.experiment) {
        case ExperimentKind::compressive_sensing:
            return sparse_truth(cfg.model.n, cfg.truth.nonzeros, cfg.truth.seed);
        case ExperimentKind::deblurring:
            return synthetic_image(cfg.model.image_height, cfg.model.image_width);
        case ExperimentKind::lorenz96:
            return lorenz_truth(cfg.model.lorenz, cfg.truth.seed);
        case ExperimentKind::darcy:
            return darcy_truth(cfg.model.darcy);
        case ExperimentKind::toy:
            return Eigen::VectorXd::Ones(n);
        case ExperimentKind::custom: {
            auto rng = make_stream(cfg.truth.seed, RngPhase::truth_generation);
            Eigen::VectorXd u(n);
            for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.normal();
            return u;
        }
    }
    throw ConfigError("build_truth: unsupported experiment");
}

std::shared_ptr<const ForwardModel> build_model(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::toy:
        case ExperimentKind::custom:
            return std::make_shared<models::IdentityModel>(cfg.model.n);
        case ExperimentKind::compressive_sensing:
            return std::make_shared<models::LinearModel>(
                models::random_gaussian_matrix(cfg.model.m, cfg.model.n,
                                               cfg.model.matrix_seed));
        case ExperimentKind::deblurring:
            return std::make_shared<models::GaussianBlurModel>(models::BlurSpec{
                cfg.model.image_height, cfg.model.image_width,
                cfg.model.sigma_blur});
        case ExperimentKind::lorenz96:
            return std::make_shared<models::Lorenz96Model>(cfg.model.lorenz);
        case ExperimentKind::darcy:
            return std::make_shared<models::DarcyModel>(cfg.model.darcy);
    }
    throw ConfigError("build_model: unsupported experiment");
}

Eigen::VectorXd resolve_init_mean(const ExperimentConfig& cfg, Eigen::Index n,
                                  const Eigen::VectorXd& truth) {
    switch (cfg.init.policy) {
        case InitPrior::MeanPolicy::constant:
            return Eigen::VectorXd::Constant(n, cfg.init.mean_value);
        case InitPrior::MeanPolicy::vector:
            if (cfg.init.mean_vector.size() != n) {
                throw ConfigError("init.mean vector has wrong dimension");
            }
            return cfg.init.mean_vector;
        case InitPrior::MeanPolicy::blurred_truth: {
            int h, w;
            if (cfg.experiment == ExperimentKind::darcy) {
                h = w = cfg.model.darcy.mesh;
            } else if (cfg.experiment == ExperimentKind::deblurring) {
                h = cfg.model.image_height;
                w = cfg.model.image_width;
            } else {
                throw ConfigError(
                    "init.from_blurred_truth only applies to grid experiments");
            }
            models::GaussianBlurModel blur({h, w, cfg.init.blur_sigma});
            return blur.evaluate(truth);
        }
    }
    throw ConfigError("resolve_init_mean: bad policy");
}

}  // namespace

ExperimentSetup build_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentSetup setup;
    setup.model = build_model(cfg);
    const Eigen::Index n = setup.model->input_dim();
    const Eigen::Index m = setup.model->output_dim();
    setup.truth = build_truth(cfg, n);

    Eigen::VectorXd gamma_diag = Eigen::VectorXd::Constant(m, cfg.obs_variance);
    Eigen::VectorXd y = setup.model->evaluate(setup.truth);
    if (cfg.obs_noise) {
        auto rng = make_stream(cfg.run.rng_seed, RngPhase::measurement_noise);
        const double sd = std::sqrt(cfg.obs_variance);
        for (Eigen::Index i = 0; i < m; ++i) y(i) += sd * rng.normal();
    }
    setup.measurement = std::make_unique<MeasurementModel>(
        MeasurementModel::diagonal(std::move(y), std::move(gamma_diag)));

    setup.run = cfg.run;
    setup.run.init_mean = resolve_init_mean(cfg, n, setup.truth);
    setup.run.init_variance = Eigen::VectorXd::Constant(n, cfg.init.variance);
    return setup;
}

namespace {

void atomic_write(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

std::string format_17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

constexpr const char* kPlotScript = R"(#!/usr/bin/env python3
"""Plots the metrics CSV next to this script (no run-time dependency of the
solver; requires matplotlib only when executed)."""
import csv
import os
import sys

here = os.path.dirname(os.path.abspath(__file__))
path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "metrics.csv")

iters, l1, misfit = [], [], []
with open(path) as f:
    for row in csv.DictReader(f):
        iters.append(int(row["iteration"]))
        l1.append(float(row["l1_error"]))
        misfit.append(float(row["data_misfit"]))

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ax1.plot(iters, l1, marker="o")
ax1.set_xlabel("iteration")
ax1.set_ylabel("l1 error")
ax2.semilogy(iters, misfit, marker="o")
ax2.set_xlabel("iteration")
ax2.set_ylabel("data misfit")
fig.tight_layout()
out = os.path.join(os.path.dirname(path), "metrics.png")
fig.savefig(out, dpi=150)
print(out)
)";

}  // namespace

void emit_metrics(const RunRecord& record, const std::string& path) {
    if (record.iterations.empty()) {
        throw StructuralError("emit_metrics: empty record");
    }
    std::string out = "iteration,l1_error,data_misfit,wall_time_seconds\n";
    for (const auto& it : record.iterations) {
        out += std::to_string(it.iteration);
        out += ',';
        out += format_17(it.l1_error);
        out += ',';
        out += format_17(it.data_misfit);
        out += ',';
        out += format_17(it.wall_time_seconds);
        out += '\n';
    }
    atomic_write(path, out);
}

void emit_vector(const Eigen::VectorXd& v, const std::string& path) {
    std::string out;
    out.reserve(static_cast<size_t>(v.size()) * 25);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out += format_17(v(i));
        out += '\n';
    }
    atomic_write(path, out);
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
    ExperimentSetup setup = build_experiment(cfg);

    RunRecord record;
    if (cfg.reg) {
        record = lp_run(setup.model, *setup.measurement, *cfg.reg, setup.run,
                        setup.truth);
    } else {
        record = run(*setup.model, *setup.measurement, setup.run, setup.truth);
    }

    const fs::path out_dir(cfg.output_dir);
    emit_metrics(record, (out_dir / "metrics.csv").string());
    emit_vector(record.final().estimate, (out_dir / "estimate.csv").string());
    atomic_write((out_dir / "plot_metrics.py").string(), kPlotScript);
    if (cfg.experiment == ExperimentKind::deblurring) {
        models::ImageBuffer img{cfg.model.image_height, cfg.model.image_width,
                                record.final().estimate};
        models::save_pgm(img, (out_dir / "estimate.pgm").string());
    }
    return record;
}

}  // namespace seki::harness
