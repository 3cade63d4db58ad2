#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seki/eki.hpp"
#include "seki/lp.hpp"
#include "seki/models/darcy.hpp"
#include "seki/models/lorenz96.hpp"

namespace seki::harness {

enum class ExperimentKind {
    toy,
    compressive_sensing,
    deblurring,
    lorenz96,
    darcy,
    custom,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

struct TruthSource {
    enum class Kind { generated, inline_vector, file } kind = Kind::generated;
    Eigen::VectorXd values;      // inline_vector
    std::string path;            // file (CSV column or PGM for deblurring)
    std::uint64_t seed = 0;      // generated
    int nonzeros = 4;            // sparse truth (compressive sensing)
};

// How the initial Gaussian ensemble is centered; variance is per-run scalar.
struct InitPrior {
    enum class MeanPolicy { constant, vector, blurred_truth } policy =
        MeanPolicy::constant;
    double mean_value = 0.0;
    Eigen::VectorXd mean_vector;
    double blur_sigma = 5.0;  // grid units, blurred_truth policy
    double variance = 1.0;
};

struct ModelParams {
    int n = 100;                   // unknown dimension (toy, cs, custom)
    int m = 30;                    // measurement dimension (cs)
    std::uint64_t matrix_seed = 7; // cs sensing matrix
    int image_height = 32;
    int image_width = 32;
    double sigma_blur = 0.7;
    models::Lorenz96Spec lorenz;
    models::DarcySpec darcy;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::toy;
    RunConfig run;
    std::optional<RegularizationConfig> reg;
    double obs_variance = 0.1;
    // When false the synthetic data is y = G(truth) exactly; obs_variance
    // still weights the update (the toy benchmark is defined this way).
    bool obs_noise = true;
    ModelParams model;
    InitPrior init;
    TruthSource truth;
    std::string output_dir = "out";

    void validate() const;
};

// Fully materialized experiment: model, truth, synthetic measurement.
struct ExperimentSetup {
    std::shared_ptr<const ForwardModel> model;
    Eigen::VectorXd truth;
    std::unique_ptr<MeasurementModel> measurement;
    RunConfig run;  // with init_mean / init_variance filled in
};

// Builds the forward model, truth, and y = G(u_true) + eta under the config
// seed, and resolves the prior into concrete vectors.
ExperimentSetup build_experiment(const ExperimentConfig& cfg);

// Runs the experiment and persists metrics.csv, estimate.csv and
// plot_metrics.py under cfg.output_dir (plus estimate.pgm for deblurring).
RunRecord run_experiment(const ExperimentConfig& cfg);

// CSV with header iteration,l1_error,data_misfit,wall_time_seconds, one row
// per iteration, 17 significant digits, atomic overwrite.
void emit_metrics(const RunRecord& record, const std::string& path);

// Single-column CSV of a vector, 17 significant digits, atomic overwrite.
void emit_vector(const Eigen::VectorXd& v, const std::string& path);

// Synthetic test image (blocks and a disk) used when no PGM is supplied.
Eigen::VectorXd synthetic_image(int height, int width);

}  // namespace seki::harness
