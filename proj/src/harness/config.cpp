#include "seki/harness/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "seki/errors.hpp"
#include "seki/harness/presets.hpp"

namespace seki::harness {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& scope,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key \"" + scope + key + "\"");
        }
    }
}

Eigen::VectorXd to_vector(const json& j, const std::string& scope) {
    if (!j.is_array()) throw ConfigError(scope + " must be an array of numbers");
    Eigen::VectorXd v(j.size());
    Eigen::Index i = 0;
    for (const auto& x : j) {
        if (!x.is_number()) throw ConfigError(scope + " must be numeric");
        v(i++) = x.get<double>();
    }
    return v;
}

void apply_sec(const json& j, SecConfig& sec) {
    check_keys(j, "run.sec.", {"enabled", "exponent_a"});
    if (j.contains("enabled")) sec.enabled = j.at("enabled").get<bool>();
    if (j.contains("exponent_a")) sec.exponent_a = j.at("exponent_a").get<double>();
}

void apply_run(const json& j, RunConfig& run) {
    check_keys(j, "run.",
               {"ensemble_size", "n_iterations", "rng_seed", "n_threads", "sec"});
    if (j.contains("ensemble_size")) run.ensemble_size = j.at("ensemble_size").get<int>();
    if (j.contains("n_iterations")) run.n_iterations = j.at("n_iterations").get<int>();
    if (j.contains("rng_seed")) run.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    if (j.contains("n_threads")) run.n_threads = j.at("n_threads").get<int>();
    if (j.contains("sec")) apply_sec(j.at("sec"), run.sec);
}

void apply_reg(const json& j, std::optional<RegularizationConfig>& reg) {
    if (j.is_null()) {
        reg.reset();
        return;
    }
    check_keys(j, "reg.", {"p", "lambda"});
    RegularizationConfig r = reg.value_or(RegularizationConfig{});
    if (j.contains("p")) r.p = j.at("p").get<double>();
    if (j.contains("lambda")) r.lambda = j.at("lambda").get<double>();
    reg = r;
}

void apply_init(const json& j, InitPrior& init) {
    check_keys(j, "init.", {"mean", "variance", "from_blurred_truth", "blur_sigma"});
    if (j.contains("mean")) {
        const auto& m = j.at("mean");
        if (m.is_number()) {
            init.policy = InitPrior::MeanPolicy::constant;
            init.mean_value = m.get<double>();
        } else {
            init.policy = InitPrior::MeanPolicy::vector;
            init.mean_vector = to_vector(m, "init.mean");
        }
    }
    if (j.contains("from_blurred_truth") && j.at("from_blurred_truth").get<bool>()) {
        init.policy = InitPrior::MeanPolicy::blurred_truth;
    }
    if (j.contains("blur_sigma")) init.blur_sigma = j.at("blur_sigma").get<double>();
    if (j.contains("variance")) init.variance = j.at("variance").get<double>();
}

void apply_model(const json& j, ModelParams& model) {
    check_keys(j, "model.",
               {"n", "m", "matrix_seed", "image_height", "image_width",
                "sigma_blur", "lorenz", "darcy"});
    if (j.contains("n")) model.n = j.at("n").get<int>();
    if (j.contains("m")) model.m = j.at("m").get<int>();
    if (j.contains("matrix_seed")) model.matrix_seed = j.at("matrix_seed").get<std::uint64_t>();
    if (j.contains("image_height")) model.image_height = j.at("image_height").get<int>();
    if (j.contains("image_width")) model.image_width = j.at("image_width").get<int>();
    if (j.contains("sigma_blur")) model.sigma_blur = j.at("sigma_blur").get<double>();
    if (j.contains("lorenz")) {
        const auto& l = j.at("lorenz");
        check_keys(l, "model.lorenz.",
                   {"n_state", "forcing", "dt", "t_final", "measured_wavenumbers"});
        if (l.contains("n_state")) model.lorenz.n_state = l.at("n_state").get<int>();
        if (l.contains("forcing")) model.lorenz.forcing = l.at("forcing").get<double>();
        if (l.contains("dt")) model.lorenz.dt = l.at("dt").get<double>();
        if (l.contains("t_final")) model.lorenz.t_final = l.at("t_final").get<double>();
        if (l.contains("measured_wavenumbers")) {
            model.lorenz.measured_wavenumbers =
                l.at("measured_wavenumbers").get<std::vector<int>>();
        }
    }
    if (j.contains("darcy")) {
        const auto& d = j.at("darcy");
        check_keys(d, "model.darcy.", {"mesh", "obs_per_side"});
        if (d.contains("mesh")) model.darcy.mesh = d.at("mesh").get<int>();
        if (d.contains("obs_per_side")) model.darcy.obs_per_side = d.at("obs_per_side").get<int>();
    }
}

void apply_truth(const json& j, TruthSource& truth) {
    check_keys(j, "truth.", {"source", "values", "path", "seed", "nonzeros"});
    if (j.contains("source")) {
        const std::string s = j.at("source").get<std::string>();
        if (s == "generated") truth.kind = TruthSource::Kind::generated;
        else if (s == "inline") truth.kind = TruthSource::Kind::inline_vector;
        else if (s == "file") truth.kind = TruthSource::Kind::file;
        else throw ConfigError("truth.source must be generated|inline|file");
    }
    if (j.contains("values")) {
        truth.values = to_vector(j.at("values"), "truth.values");
        truth.kind = TruthSource::Kind::inline_vector;
    }
    if (j.contains("path")) {
        truth.path = j.at("path").get<std::string>();
        truth.kind = TruthSource::Kind::file;
    }
    if (j.contains("seed")) truth.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("nonzeros")) truth.nonzeros = j.at("nonzeros").get<int>();
}

ExperimentConfig from_json(const json& root) {
    if (!root.is_object()) throw ConfigError("config root must be an object");
    check_keys(root, "",
               {"experiment", "output_dir", "obs_variance", "obs_noise", "run",
                "reg", "init", "model", "truth"});
    if (!root.contains("experiment")) {
        throw ConfigError("missing required key \"experiment\"");
    }
    ExperimentConfig cfg =
        make_preset(root.at("experiment").get<std::string>());
    if (root.contains("output_dir")) cfg.output_dir = root.at("output_dir").get<std::string>();
    if (root.contains("obs_variance")) cfg.obs_variance = root.at("obs_variance").get<double>();
    if (root.contains("obs_noise")) cfg.obs_noise = root.at("obs_noise").get<bool>();
    if (root.contains("run")) apply_run(root.at("run"), cfg.run);
    if (root.contains("reg")) apply_reg(root.at("reg"), cfg.reg);
    if (root.contains("init")) apply_init(root.at("init"), cfg.init);
    if (root.contains("model")) apply_model(root.at("model"), cfg.model);
    if (root.contains("truth")) apply_truth(root.at("truth"), cfg.truth);
    cfg.validate();
    return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return from_json(root);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_config(text);
}

}  // namespace seki::harness
