#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mtf::cli {

using Complex = std::complex<double>;

enum class Mode { OneD2Dom, OneD3Dom, OneDBounded, SchwarzEquiv, Spectrum2D, Spectrum2D3Dom, Sweep };

const std::vector<std::string>& mode_names();
Mode parse_mode(const std::string& name);
std::string mode_name(Mode m);

/// Every key of the config file has a flag with the same name, underscores
/// replaced by dashes.
struct RunConfig {
  Mode mode = Mode::OneD2Dom;

  // geometry
  std::string geometry;       // circle | square | mesh | annulus | square-annulus
  std::string mesh_file;
  int n = 128;                // elements per closed curve
  int n_inner = 0;            // three-domain presets; 0 means n
  int n_outer = 0;
  double radius = 1.0;
  double side = 1.0;
  double inner_size = 0.5;
  double outer_size = 1.0;
  double gamma = 0.5;         // bounded interval split point

  // material and relaxation, one entry per subdomain (or one shared entry)
  std::vector<double> a = {1.0};
  std::vector<Complex> sigma = {Complex(0.1, 0.0)};

  // jump data: (alpha, beta) for two subdomains, four values for three
  std::vector<double> jumps = {1.0, 0.5};

  // iterations, or grid points for sweep
  std::optional<int> steps;
  double sigma_min = -0.95;
  double sigma_max = 3.0;
  std::string sweep_target = "1d";  // 1d | 1d-3dom | 2d | 2d-3dom

  double epsilon = 0.05;
  int quadrature_order = 8;
  int max_eig_dim = 4000;
  std::string out = "mtf-out";

  int iteration_steps() const { return steps.value_or(6); }
  int sweep_steps() const { return steps.value_or(200); }

  /// Per-subdomain lookup: a single entry is shared by all subdomains.
  double a_of(std::size_t j) const;
  Complex sigma_of(std::size_t j) const;

  /// Checks mode-specific requirements; throws ConfigError naming the field.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Unknown keys are rejected.
RunConfig from_json(const nlohmann::json& j, RunConfig base = {});

/// Parses "0.1", "-0.4", "0.2+0.3i", "1-2i".
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

/// Reads flags and an optional --config file; flags override file values.
/// Returns std::nullopt when help was printed. Throws ConfigError.
std::optional<RunConfig> parse_config(int argc, const char* const* argv);

}  // namespace mtf::cli
