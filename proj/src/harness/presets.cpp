#include "seki/harness/presets.hpp"

#include "seki/errors.hpp"

namespace seki::harness {

namespace {

ExperimentConfig toy_preset() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::toy;
    cfg.model.n = 100;
    cfg.obs_variance = 0.1;
    cfg.obs_noise = false;  // the target is exactly the all-ones vector
    cfg.run.ensemble_size = 50;
    cfg.run.n_iterations = 20;
    cfg.run.sec = {true, 1.0};
    // Only the first component starts away from the true value.
    cfg.init.policy = InitPrior::MeanPolicy::vector;
    cfg.init.mean_vector = Eigen::VectorXd::Ones(100);
    cfg.init.mean_vector(0) = 0.0;
    cfg.init.variance = 0.1;
    cfg.truth.kind = TruthSource::Kind::inline_vector;
    cfg.truth.values = Eigen::VectorXd::Ones(100);
    return cfg;
}

ExperimentConfig cs_preset() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::compressive_sensing;
    cfg.model.n = 100;
    cfg.model.m = 30;
    cfg.model.matrix_seed = 7;
    cfg.obs_variance = 1e-2;
    cfg.reg = RegularizationConfig{1.0, 50.0};
    cfg.run.ensemble_size = 50;
    cfg.run.n_iterations = 20;
    cfg.run.sec = {true, 1.0};
    cfg.init.policy = InitPrior::MeanPolicy::constant;
    cfg.init.mean_value = 0.0;
    cfg.init.variance = 1.0;
    cfg.truth.kind = TruthSource::Kind::generated;
    cfg.truth.seed = 11;
    cfg.truth.nonzeros = 4;
    return cfg;
}

ExperimentConfig deblur_preset() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::deblurring;
    cfg.model.image_height = 32;  // desk scale; 128x128 cameraman via truth.path
    cfg.model.image_width = 32;
    cfg.model.sigma_blur = 0.7;
    cfg.obs_variance = 1e-4;
    cfg.run.ensemble_size = 50;
    cfg.run.n_iterations = 25;
    cfg.run.sec = {true, 3.0};
    cfg.init.policy = InitPrior::MeanPolicy::constant;
    cfg.init.mean_value = 0.0;
    cfg.init.variance = 2e-4;
    cfg.truth.kind = TruthSource::Kind::generated;
    return cfg;
}

ExperimentConfig lorenz_preset() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::lorenz96;
    cfg.model.lorenz.n_state = 40;
    cfg.model.lorenz.forcing = 8.0;
    cfg.model.lorenz.dt = 0.01;
    cfg.model.lorenz.t_final = 0.5;
    // First eighteen measured waves, skipping the two largest-scale modes.
    cfg.model.lorenz.measured_wavenumbers.clear();
    for (int w = 2; w <= 19; ++w) {
        cfg.model.lorenz.measured_wavenumbers.push_back(w);
    }
    cfg.obs_variance = 1e-2;
    cfg.reg = RegularizationConfig{2.0, 0.1};
    cfg.run.ensemble_size = 30;
    cfg.run.n_iterations = 30;
    cfg.run.sec = {true, 1.0};
    cfg.init.policy = InitPrior::MeanPolicy::constant;
    cfg.init.mean_value = 0.0;
    cfg.init.variance = 1.0;
    cfg.truth.kind = TruthSource::Kind::generated;
    cfg.truth.seed = 5;
    return cfg;
}

ExperimentConfig darcy_preset() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::darcy;
    cfg.model.darcy.mesh = 25;  // desk scale; the full-size problem uses 50
    cfg.model.darcy.obs_per_side = 20;
    cfg.obs_variance = 1e-6;
    cfg.reg = RegularizationConfig{1.0, 1.0};
    cfg.run.ensemble_size = 300;
    cfg.run.n_iterations = 20;
    cfg.run.sec = {true, 0.2};
    cfg.init.policy = InitPrior::MeanPolicy::blurred_truth;
    // Blur stddev of 5 cells at the reference 50-cell mesh, kept physically
    // equivalent at the desk-scale resolution.
    cfg.init.blur_sigma = 5.0 * cfg.model.darcy.mesh / 50.0;
    cfg.init.variance = 1e-3;
    cfg.truth.kind = TruthSource::Kind::generated;
    return cfg;
}

ExperimentConfig custom_preset() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::custom;
    cfg.model.n = 10;
    cfg.obs_variance = 0.1;
    cfg.run.ensemble_size = 20;
    cfg.run.n_iterations = 10;
    cfg.init.variance = 1.0;
    cfg.truth.kind = TruthSource::Kind::generated;
    return cfg;
}

}  // namespace

ExperimentConfig make_preset(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::toy: return toy_preset();
        case ExperimentKind::compressive_sensing: return cs_preset();
        case ExperimentKind::deblurring: return deblur_preset();
        case ExperimentKind::lorenz96: return lorenz_preset();
        case ExperimentKind::darcy: return darcy_preset();
        case ExperimentKind::custom: return custom_preset();
    }
    throw ConfigError("make_preset: unknown experiment kind");
}

ExperimentConfig make_preset(const std::string& name) {
    return make_preset(experiment_from_string(name));
}

std::vector<std::string> preset_names() {
    return {"toy", "compressive_sensing", "deblurring", "lorenz96", "darcy",
            "custom"};
}

}  // namespace seki::harness
