#pragma once

#include <string>
#include <vector>

#include "mtf/cli/config.hpp"

namespace mtf::cli {

struct RunReport {
  std::string run_id;
  nlohmann::json json;             // config echo, results, residuals, timings
  std::vector<std::string> files;  // artifacts written under cfg.out
};

/// FNV-1a hash of the canonical config dump without the output directory,
/// as 16 hex digits.
std::string run_id(const RunConfig& cfg);

/// Executes one mode and writes its artifacts plus report.json into cfg.out.
/// Errors from the numerical modules propagate unchanged.
RunReport run(const RunConfig& cfg);

}  // namespace mtf::cli
