#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "xtalk/net_model.hpp"
#include "xtalk/rlc_pair.hpp"

namespace xtalk {

// Parsed analysis configuration. Boundary units are um / ohm / fF / pH / ps;
// everything is converted to SI on ingestion. `resolved` echoes the inputs
// with defaults filled so any report reproduces its run.
struct AnalysisConfig {
  std::string mode;  // "rc" | "rlc"
  VictimNetGeometry geom;  // valid when mode == rc
  CoupledRlcPair pair;     // valid when mode == rlc

  std::optional<double> dt;       // s
  std::optional<double> t_stop;   // s
  double seg_len_um = 10.0;
  int samples = 0;  // 0 = native sampling for waveform output

  nlohmann::json resolved;
};

// Strict-schema JSON parse: unknown keys are rejected with a nearest-key
// suggestion, unit conversion applied, defaults filled and echoed.
AnalysisConfig parse_config(const std::string& text);

}  // namespace xtalk
