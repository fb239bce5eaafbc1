#include "mtf/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "mtf/errors.hpp"

namespace mtf::cli {

namespace {

const std::vector<std::pair<Mode, std::string>> kModes = {
    {Mode::OneD2Dom, "1d-2dom"},          {Mode::OneD3Dom, "1d-3dom"},
    {Mode::OneDBounded, "1d-bounded"},    {Mode::SchwarzEquiv, "schwarz-equiv"},
    {Mode::Spectrum2D, "spectrum-2d"},    {Mode::Spectrum2D3Dom, "spectrum-2d-3dom"},
    {Mode::Sweep, "sweep"}};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Complex complex_from_json(const nlohmann::json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_string()) return parse_complex(v.get<std::string>());
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError("sigma entries must be numbers, [re, im] pairs or strings like \"0.2+0.1i\"");
}

template <class T>
std::vector<T> list_from_json(const nlohmann::json& v, const std::string& key) {
  try {
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

template <class T>
T scalar_from_json(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void require_count(std::size_t have, std::initializer_list<std::size_t> allowed, const std::string& key,
                   const std::string& mode) {
  for (std::size_t k : allowed) {
    if (have == k) return;
  }
  std::ostringstream os;
  os << "field '" << key << "' for mode " << mode << " needs ";
  bool first = true;
  for (std::size_t k : allowed) {
    os << (first ? "" : " or ") << k;
    first = false;
  }
  os << " entries, got " << have;
  throw ConfigError(os.str());
}

}  // namespace

const std::vector<std::string>& mode_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& m : kModes) out.push_back(m.second);
    return out;
  }();
  return names;
}

Mode parse_mode(const std::string& name) {
  for (const auto& m : kModes) {
    if (m.second == name) return m.first;
  }
  throw ConfigError("unknown mode '" + name + "'");
}

std::string mode_name(Mode m) {
  for (const auto& e : kModes) {
    if (e.first == m) return e.second;
  }
  return "?";
}

double RunConfig::a_of(std::size_t j) const { return a.size() == 1 ? a[0] : a.at(j); }
Complex RunConfig::sigma_of(std::size_t j) const { return sigma.size() == 1 ? sigma[0] : sigma.at(j); }

void RunConfig::validate() const {
  const std::string m = mode_name(mode);
  require(!a.empty(), "field 'a' is empty");
  for (double v : a) require(v > 0.0 && std::isfinite(v), "field 'a' must be positive");
  require(!sigma.empty(), "field 'sigma' is empty");
  for (const Complex& s : sigma) {
    require(std::isfinite(s.real()) && std::isfinite(s.imag()), "field 'sigma' must be finite");
    require(std::abs(s + 1.0) > 0.0,
            "sigma = -1 is not allowed: (1+sigma) Id - P must stay invertible");
  }
  require(epsilon >= 0.0, "field 'epsilon' must be nonnegative");
  require(quadrature_order >= 2 && quadrature_order <= 64, "field 'quadrature_order' must lie in [2, 64]");
  require(max_eig_dim >= 1 && max_eig_dim <= 4000, "field 'max_eig_dim' must lie in [1, 4000]");
  require(!out.empty(), "field 'out' is empty");
  if (steps) require(*steps >= 0, "field 'steps' must be nonnegative");

  auto equal_a = [&] {
    for (double v : a) require(v == a[0], "mode " + m + " uses one material constant; 'a' entries differ");
  };
  auto need_geometry = [&](std::initializer_list<const char*> allowed) {
    require(!geometry.empty(), "missing required field 'geometry' for mode " + m);
    bool ok = false;
    for (const char* g : allowed) ok = ok || geometry == g;
    std::string list;
    for (const char* g : allowed) list += std::string(list.empty() ? "" : ", ") + g;
    require(ok, "field 'geometry' = '" + geometry + "' is not one of: " + list);
    if (geometry == "mesh") require(!mesh_file.empty(), "missing required field 'mesh_file' for geometry mesh");
    require(n >= 3, "field 'n' must be at least 3");
    if (geometry == "square" || geometry == "square-annulus") {
      require(n % 4 == 0 && n_inner % 4 == 0 && n_outer % 4 == 0,
              "square geometries need element counts divisible by 4");
    }
    require(radius > 0.0 && side > 0.0, "geometry sizes must be positive");
    require(inner_size > 0.0 && outer_size > inner_size, "need 0 < inner_size < outer_size");
  };

  switch (mode) {
    case Mode::OneD2Dom:
      equal_a();
      require_count(sigma.size(), {1, 2}, "sigma", m);
      require_count(jumps.size(), {2}, "jumps", m);
      break;
    case Mode::OneD3Dom:
      equal_a();
      require_count(sigma.size(), {1, 3}, "sigma", m);
      require_count(jumps.size(), {4}, "jumps", m);
      break;
    case Mode::OneDBounded:
    case Mode::SchwarzEquiv:
      equal_a();
      require(gamma > 0.0 && gamma < 1.0, "field 'gamma' must lie in (0, 1)");
      require_count(sigma.size(), {1, 2}, "sigma", m);
      break;
    case Mode::Spectrum2D:
      need_geometry({"circle", "square", "mesh"});
      require_count(sigma.size(), {1, 2}, "sigma", m);
      require_count(a.size(), {1, 2}, "a", m);
      break;
    case Mode::Spectrum2D3Dom:
      need_geometry({"annulus", "square-annulus"});
      require_count(sigma.size(), {1, 3}, "sigma", m);
      require_count(a.size(), {1, 3}, "a", m);
      break;
    case Mode::Sweep:
      require(sigma_min < sigma_max, "field 'sigma_min' must be below 'sigma_max'");
      require(sweep_steps() >= 2, "field 'steps' must be at least 2 for a sweep");
      if (sweep_target == "2d") {
        need_geometry({"circle", "square", "mesh"});
        require_count(a.size(), {1, 2}, "a", m);
      } else if (sweep_target == "2d-3dom") {
        need_geometry({"annulus", "square-annulus"});
        require_count(a.size(), {1, 3}, "a", m);
      } else {
        require(sweep_target == "1d" || sweep_target == "1d-3dom",
                "field 'sweep_target' must be one of: 1d, 1d-3dom, 2d, 2d-3dom");
        equal_a();
      }
      break;
  }
}

Complex parse_complex(const std::string& text) {
  static const std::regex re(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij])?\s*$)");
  static const std::regex pure_imag(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij]\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pure_imag)) {
    const std::string mag = m[1].str();
    if (mag.empty() || mag == "+") return {0.0, 1.0};
    if (mag == "-") return {0.0, -1.0};
    return {0.0, std::stod(mag)};
  }
  if (std::regex_match(text, m, re) && m[1].matched) {
    const double re_part = std::stod(m[1].str());
    double im_part = 0.0;
    if (m[2].matched) {
      im_part = m[3].matched ? std::stod(m[3].str()) : 1.0;
      if (m[2].str() == "-") im_part = -im_part;
    }
    return {re_part, im_part};
  }
  throw ConfigError("cannot parse '" + text + "' as a number (use forms like 0.1 or 0.2+0.3i)");
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["mode"] = mode_name(c.mode);
  j["geometry"] = c.geometry;
  j["mesh_file"] = c.mesh_file;
  j["n"] = c.n;
  j["n_inner"] = c.n_inner;
  j["n_outer"] = c.n_outer;
  j["radius"] = c.radius;
  j["side"] = c.side;
  j["inner_size"] = c.inner_size;
  j["outer_size"] = c.outer_size;
  j["gamma"] = c.gamma;
  j["a"] = c.a;
  nlohmann::json sig = nlohmann::json::array();
  for (const Complex& s : c.sigma) {
    if (s.imag() == 0.0) {
      sig.push_back(s.real());
    } else {
      sig.push_back({s.real(), s.imag()});
    }
  }
  j["sigma"] = sig;
  j["jumps"] = c.jumps;
  j["steps"] = c.steps ? nlohmann::json(*c.steps) : nlohmann::json(nullptr);
  j["sigma_min"] = c.sigma_min;
  j["sigma_max"] = c.sigma_max;
  j["sweep_target"] = c.sweep_target;
  j["epsilon"] = c.epsilon;
  j["quadrature_order"] = c.quadrature_order;
  j["max_eig_dim"] = c.max_eig_dim;
  j["out"] = c.out;
  return j;
}

RunConfig from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "mode") {
      c.mode = parse_mode(scalar_from_json<std::string>(v, key));
    } else if (key == "geometry") {
      c.geometry = lower(scalar_from_json<std::string>(v, key));
    } else if (key == "mesh_file") {
      c.mesh_file = scalar_from_json<std::string>(v, key);
    } else if (key == "n") {
      c.n = scalar_from_json<int>(v, key);
    } else if (key == "n_inner") {
      c.n_inner = scalar_from_json<int>(v, key);
    } else if (key == "n_outer") {
      c.n_outer = scalar_from_json<int>(v, key);
    } else if (key == "radius") {
      c.radius = scalar_from_json<double>(v, key);
    } else if (key == "side") {
      c.side = scalar_from_json<double>(v, key);
    } else if (key == "inner_size") {
      c.inner_size = scalar_from_json<double>(v, key);
    } else if (key == "outer_size") {
      c.outer_size = scalar_from_json<double>(v, key);
    } else if (key == "gamma") {
      c.gamma = scalar_from_json<double>(v, key);
    } else if (key == "a") {
      c.a = list_from_json<double>(v, key);
    } else if (key == "sigma") {
      // a bare array lists one entry per subdomain; complex entries are
      // written as [re, im] or "re+imi"
      c.sigma.clear();
      if (v.is_array()) {
        for (const auto& e : v) c.sigma.push_back(complex_from_json(e));
      } else {
        c.sigma.push_back(complex_from_json(v));
      }
    } else if (key == "jumps") {
      c.jumps = list_from_json<double>(v, key);
    } else if (key == "steps") {
      if (v.is_null()) {
        c.steps.reset();
      } else {
        c.steps = scalar_from_json<int>(v, key);
      }
    } else if (key == "sigma_min") {
      c.sigma_min = scalar_from_json<double>(v, key);
    } else if (key == "sigma_max") {
      c.sigma_max = scalar_from_json<double>(v, key);
    } else if (key == "sweep_target") {
      c.sweep_target = scalar_from_json<std::string>(v, key);
    } else if (key == "epsilon") {
      c.epsilon = scalar_from_json<double>(v, key);
    } else if (key == "quadrature_order") {
      c.quadrature_order = scalar_from_json<int>(v, key);
    } else if (key == "max_eig_dim") {
      c.max_eig_dim = scalar_from_json<int>(v, key);
    } else if (key == "out") {
      c.out = scalar_from_json<std::string>(v, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return c;
}

std::optional<RunConfig> parse_config(int argc, const char* const* argv) {
  CLI::App app{"Multitrace formulation experiments for -u'' + a^2 u = 0"};
  app.set_version_flag("--version", "mtf 0.1.0");

  std::string mode_arg, config_file;
  app.add_option("mode,--mode", mode_arg, "Run mode, positional or as a flag")
      ->check(CLI::IsMember(mode_names()));
  app.add_option("--config", config_file, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);

  nlohmann::json flags = nlohmann::json::object();
  auto text = [&](const std::string& key, const std::string& help) {
    auto* o = app.add_option_function<std::string>(
        "--" + std::regex_replace(key, std::regex("_"), "-"),
        [&flags, key](const std::string& v) { flags[key] = v; }, help);
    return o;
  };
  auto integer = [&](const std::string& key, const std::string& help) {
    return app.add_option_function<int>(
        "--" + std::regex_replace(key, std::regex("_"), "-"),
        [&flags, key](int v) { flags[key] = v; }, help);
  };
  auto real = [&](const std::string& key, const std::string& help) {
    return app.add_option_function<double>(
        "--" + std::regex_replace(key, std::regex("_"), "-"),
        [&flags, key](double v) { flags[key] = v; }, help);
  };
  auto reals = [&](const std::string& key, const std::string& help) {
    return app
        .add_option_function<std::vector<double>>(
            "--" + std::regex_replace(key, std::regex("_"), "-"),
            [&flags, key](const std::vector<double>& v) { flags[key] = v; }, help)
        ->delimiter(',')
        ->allow_extra_args();
  };

  text("geometry", "circle | square | mesh | annulus | square-annulus");
  text("mesh_file", "Mesh file for geometry 'mesh'");
  integer("n", "Elements per closed curve (default 128)");
  integer("n_inner", "Elements on the inner curve of three-domain presets");
  integer("n_outer", "Elements on the outer curve of three-domain presets");
  real("radius", "Circle radius");
  real("side", "Square side length");
  real("inner_size", "Inner radius (or half side) of three-domain presets");
  real("outer_size", "Outer radius (or half side) of three-domain presets");
  real("gamma", "Split point of the bounded interval (0, 1)");
  reals("a", "Material constant(s), one per subdomain or one shared");
  app.add_option_function<std::vector<std::string>>(
         "--sigma",
         [&flags](const std::vector<std::string>& v) {
           nlohmann::json arr = nlohmann::json::array();
           for (const auto& s : v) {
             const Complex z = parse_complex(s);
             if (z.imag() == 0.0) {
               arr.push_back(z.real());
             } else {
               arr.push_back(nlohmann::json::array({z.real(), z.imag()}));
             }
           }
           flags["sigma"] = arr;
         },
         "Relaxation parameter(s), e.g. 0.1 or -0.4,1 or 0.2+0.1i")
      ->delimiter(',')
      ->allow_extra_args();
  reals("jumps", "Jump data: alpha,beta or alpha_left,beta_left,alpha_right,beta_right");
  integer("steps", "Iterations, or grid points for sweep");
  real("sigma_min", "Sweep lower bound");
  real("sigma_max", "Sweep upper bound");
  text("sweep_target", "1d | 1d-3dom | 2d | 2d-3dom");
  real("epsilon", "Cluster radius (default 0.05)");
  integer("quadrature_order", "Gauss order for regular element pairs (default 8)");
  integer("max_eig_dim", "Largest eigenproblem accepted (default 4000)");
  text("out", "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  bool mode_given = !mode_arg.empty();
  if (!config_file.empty()) {
    std::ifstream is(config_file);
    nlohmann::json j;
    try {
      is >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("cannot parse '" + config_file + "': " + e.what());
    }
    mode_given = mode_given || (j.is_object() && j.contains("mode"));
    cfg = from_json(j, cfg);
  }
  cfg = from_json(flags, cfg);
  if (!mode_arg.empty()) cfg.mode = parse_mode(mode_arg);
  if (!mode_given) {
    throw ConfigError("missing required field 'mode'");
  }
  cfg.validate();
  return cfg;
}

}  // namespace mtf::cli
