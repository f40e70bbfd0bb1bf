#pragma once

#include <string>

#include "sparseal/harness.hpp"

namespace sparseal {

// Loads an experiment config from a .json or .toml file (chosen by
// extension). Unknown keys are rejected so typos fail loudly. The TOML
// support is a flat subset: [section] headers, dotted keys, scalars, strings,
// booleans, homogeneous scalar arrays, and # comments; sweep noise settings
// are the parallel arrays sweep.noise_kinds / sweep.noise_levels.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig parse_config_toml(const std::string& text);

// The defaults serialized as JSON, for --print-config style introspection.
std::string default_config_json();

}  // namespace sparseal
