#include <iostream>

#include "mtf/cli/config.hpp"
#include "mtf/cli/run.hpp"
#include "mtf/errors.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
  std::optional<mtf::cli::RunConfig> cfg;
  try {
    cfg = mtf::cli::parse_config(argc, argv);
  } catch (const mtf::Error& e) {
    std::cerr << "mtf: " << e.what() << "\n";
    return kConfigError;
  }
  if (!cfg) return 0;

  try {
    const auto report = mtf::cli::run(*cfg);
    std::cout << "run " << report.run_id << " (" << mtf::cli::mode_name(cfg->mode) << ") -> "
              << cfg->out << "\n";
    for (const auto& [key, value] : report.json["residuals"].items()) {
      std::cout << "  " << key << " = " << value << "\n";
    }
  } catch (const mtf::ConfigError& e) {
    std::cerr << "mtf: " << e.what() << "\n";
    return kConfigError;
  } catch (const mtf::InvalidArgument& e) {
    std::cerr << "mtf: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "mtf: " << e.what() << "\n";
    return kNumericalError;
  }
  return 0;
}
