#pragma once

#include <string>
#include <vector>

#include "seki/harness/experiment.hpp"

namespace seki::harness {

// Benchmark presets with the published parameter values. Desk-scale defaults:
// deblurring runs at 32x32 with a synthetic image, darcy at a 25x25 mesh.
ExperimentConfig make_preset(ExperimentKind kind);
ExperimentConfig make_preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace seki::harness
