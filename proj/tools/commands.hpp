#pragma once

#include <json.hpp>

#include "run_config.hpp"

namespace pdmspec::cli {

using Json = nlohmann::ordered_json;

struct Outcome {
  Json payload;
  /// 0 success, 1 verification failure.
  int exit_code = 0;
};

Outcome cmd_model(const RunConfig& cfg);
Outcome cmd_map(const RunConfig& cfg);
Outcome cmd_verify(const RunConfig& cfg);
Outcome cmd_crossings(const RunConfig& cfg);

Json config_json(const RunConfig& cfg);

}  // namespace pdmspec::cli
