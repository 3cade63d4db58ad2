#pragma once

#include <string>

#include "seki/harness/experiment.hpp"

namespace seki::harness {

// Parses a JSON config file. The "experiment" key selects a preset whose
// values the remaining keys override; unknown keys are errors.
ExperimentConfig load_config(const std::string& path);

// Same, from an in-memory JSON document.
ExperimentConfig parse_config(const std::string& json_text);

}  // namespace seki::harness
