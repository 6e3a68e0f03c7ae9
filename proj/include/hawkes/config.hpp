#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "hawkes/microbes.hpp"
#include "hawkes/model.hpp"
#include "hawkes/montecarlo.hpp"

namespace hawkes {

/// One experiment file: a model (direct or microbes) plus run parameters.
/// Parsing is strict: unknown keys anywhere are ConfigError.
struct Config {
  ModelSpec spec;
  std::optional<MicrobeParams> microbes;
  ExperimentConfig experiment;  // holds a copy of spec
  double resolvent_h = 1e-3;
  double resolvent_horizon = 40.0;
  double simulate_horizon = 100.0;
};

Config parse_config(const nlohmann::json& j);
Config load_config(const std::filesystem::path& path);

}  // namespace hawkes
