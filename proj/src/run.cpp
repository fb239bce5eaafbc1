#include "mtf/cli/run.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mtf/bem/calderon2d.hpp"
#include "mtf/bounded.hpp"
#include "mtf/errors.hpp"
#include "mtf/mtf1d.hpp"
#include "mtf/spectra.hpp"

namespace mtf::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kZeroTol = 1e-12;

class Timer {
 public:
  explicit Timer(nlohmann::json& sink) : sink_(sink) {}
  void mark(const std::string& phase) {
    const auto now = std::chrono::steady_clock::now();
    sink_[phase] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  nlohmann::json& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

/// Collects artifact files under the output directory.
class Artifacts {
 public:
  explicit Artifacts(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    std::ofstream os(dir_ / name);
    if (!os) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
    files_.push_back(name);
    return os;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  const std::vector<std::string>& files() const { return files_; }
  void add(const std::string& name) { files_.push_back(name); }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

nlohmann::json complex_json(num::Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json complex_list(const std::vector<num::Complex>& zs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& z : zs) arr.push_back(complex_json(z));
  return arr;
}

nlohmann::json cluster_json(const spectra::ClusterReport& rep) {
  nlohmann::json j;
  j["epsilon"] = rep.epsilon;
  j["points"] = complex_list(rep.points);
  j["fractions"] = rep.fractions;
  j["combined"] = rep.combined();
  j["remainder"] = rep.remainder;
  return j;
}

void write_history(std::ofstream os, const std::vector<double>& errors) {
  os << "step,error\n" << std::setprecision(12);
  for (std::size_t k = 0; k < errors.size(); ++k) os << k << "," << errors[k] << "\n";
}

void write_spectrum_files(Artifacts& out, const std::vector<num::Complex>& eigs,
                          const std::vector<num::Complex>& points) {
  {
    auto os = out.open("eigenvalues.csv");
    spectra::write_eigenvalue_csv(os, eigs);
  }
  {
    auto os = out.open("theory.csv");
    spectra::write_eigenvalue_csv(os, points);
  }
  auto gp = out.open("spectrum.gp");
  gp << "set datafile separator ','\n"
        "set xlabel 'Re'\nset ylabel 'Im'\nset size ratio -1\nset grid\n"
        "plot 'eigenvalues.csv' skip 1 using 1:2 with points pt 7 ps 0.5 title 'eigenvalues', \\\n"
        "     'theory.csv' skip 1 using 1:2 with points pt 2 ps 2 lw 2 title 'accumulation points'\n";
}

void write_history_plot(Artifacts& out) {
  auto gp = out.open("history.gp");
  gp << "set datafile separator ','\n"
        "set xlabel 'iteration'\nset ylabel 'error'\nset logscale y\nset grid\n"
        "plot 'history.csv' skip 1 using 1:($2 > 0 ? $2 : 1e-17) with linespoints title 'error'\n";
}

int first_zero(const std::vector<double>& errors, double scale) {
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (errors[k] <= kZeroTol * std::max(scale, 1.0)) return static_cast<int>(k);
  }
  return -1;
}

void check_dimension(const RunConfig& cfg, Eigen::Index dim) {
  if (dim > cfg.max_eig_dim) {
    throw ConfigError("eigenproblem dimension " + std::to_string(dim) + " exceeds max_eig_dim = " +
                      std::to_string(cfg.max_eig_dim));
  }
}

bool all_zero(const std::vector<num::Complex>& s) {
  for (const auto& z : s) {
    if (z != num::Complex(0.0, 0.0)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- 1D modes

void run_1d_2dom(const RunConfig& cfg, nlohmann::json& res, nlohmann::json& resid, Timer& timer,
                 Artifacts& out) {
  const double a = cfg.a_of(0);
  const std::vector<num::Complex> sig = {cfg.sigma_of(0), cfg.sigma_of(1)};
  const oned::JumpData jump{cfg.jumps[0], cfg.jumps[1], 0.0};
  const auto op = oned::jacobi_operator_2dom(a, sig[0], sig[1], jump);
  const auto hist = oned::block_jacobi_run(op, num::Vector::Zero(4), cfg.iteration_steps());
  timer.mark("iterate");
  const auto eig = num::eig_dense(op.matrix);
  const auto theory = oned::theoretical_spectrum(sig);
  timer.mark("spectrum");

  const num::Vector exact = oned::traces_2dom(oned::represent_1d(a, jump));
  res["converged_in"] = first_zero(hist.errors, hist.fixed_point.norm());
  res["errors"] = hist.errors;
  res["eigenvalues"] = complex_list(eig.eigenvalues);
  res["theoretical_spectrum"] = complex_list(theory);
  res["spectral_radius"] = num::spectral_radius(eig.eigenvalues);
  resid["spectrum_vs_theory"] = num::multiset_distance(eig.eigenvalues, theory);
  resid["fixed_point_vs_exact_traces"] = (hist.fixed_point - exact).norm();
  if (all_zero(sig)) resid["nilpotency_J2_squared"] = num::max_abs(op.matrix * op.matrix);
  if (sig[0] != 0.0 && sig[1] != 0.0) {
    const auto sys = oned::assemble_mtf_2dom(a, sig[0], sig[1], jump);
    const num::Vector u = num::solve_dense(sys.system_matrix, sys.rhs);
    resid["mtf_system_residual"] = (sys.system_matrix * u - sys.rhs).norm();
    num::Vector jump_vec(2);
    jump_vec << -jump.alpha, jump.beta;
    resid["transmission_condition"] =
        (u.head(2) - oned::exchange_matrix() * u.tail(2) - jump_vec).norm();
  }
  write_history(out.open("history.csv"), hist.errors);
  write_history_plot(out);
  write_spectrum_files(out, eig.eigenvalues, theory);
}

void run_1d_3dom(const RunConfig& cfg, nlohmann::json& res, nlohmann::json& resid, Timer& timer,
                 Artifacts& out) {
  const double a = cfg.a_of(0);
  const std::vector<num::Complex> sig = {cfg.sigma_of(0), cfg.sigma_of(1), cfg.sigma_of(2)};
  const oned::ThreeDomainJumps jumps{cfg.jumps[0], cfg.jumps[1], cfg.jumps[2], cfg.jumps[3]};
  const auto op = oned::jacobi_operator_3dom(a, sig[0], sig[1], sig[2], jumps);
  const auto hist = oned::block_jacobi_run(op, num::Vector::Zero(8), cfg.iteration_steps());
  timer.mark("iterate");
  const auto eig = num::eig_dense(op.matrix);
  const auto theory = oned::theoretical_spectrum(sig);
  timer.mark("spectrum");

  const num::Vector exact = oned::traces_3dom(oned::represent_1d_3dom(a, jumps));
  res["converged_in"] = first_zero(hist.errors, hist.fixed_point.norm());
  res["errors"] = hist.errors;
  res["eigenvalues"] = complex_list(eig.eigenvalues);
  res["theoretical_spectrum"] = complex_list(theory);
  res["spectral_radius"] = num::spectral_radius(eig.eigenvalues);
  resid["spectrum_vs_theory"] = num::multiset_distance(eig.eigenvalues, theory);
  resid["fixed_point_vs_exact_traces"] = (hist.fixed_point - exact).norm();
  const auto P0 = oned::calderon_middle_3dom(a).matrix;
  resid["middle_projector"] = num::max_abs(P0 * P0 - P0);
  if (all_zero(sig)) {
    const num::DenseMatrix J2 = op.matrix * op.matrix;
    resid["nilpotency_J3_fourth"] = num::max_abs(J2 * J2);
  }
  write_history(out.open("history.csv"), hist.errors);
  write_history_plot(out);
  write_spectrum_files(out, eig.eigenvalues, theory);
}

void run_1d_bounded(const RunConfig& cfg, nlohmann::json& res, nlohmann::json& resid, Timer& timer,
                    Artifacts& out) {
  const bounded::BoundedGeometry geom{cfg.gamma, cfg.a_of(0)};
  const std::vector<num::Complex> sig = {cfg.sigma_of(0), cfg.sigma_of(1)};
  const oned::JumpData jump{cfg.jumps.at(0), cfg.jumps.at(1), cfg.gamma};
  const auto proj = bounded::calderon_bounded(geom);
  const auto dtn = bounded::dtn_operators(geom);
  const auto rebuilt = bounded::calderon_from_dtn(dtn);
  const auto op = bounded::jacobi_operator_bounded(geom, sig[0], sig[1], jump);
  const auto hist = oned::block_jacobi_run(op, num::Vector::Zero(4), cfg.iteration_steps());
  const auto eig = num::eig_dense(op.matrix);
  const auto theory = oned::theoretical_spectrum(sig);
  timer.mark("compute");

  const auto sol = bounded::transmission_solve_bounded(geom, jump);
  num::Vector exact(4);
  exact << sol.value(cfg.gamma, -1), sol.derivative(cfg.gamma, -1), sol.value(cfg.gamma, 1),
      -sol.derivative(cfg.gamma, 1);

  res["dtn"] = {{"dtn1", dtn.dtn1}, {"dtn2", dtn.dtn2}, {"ntd1", dtn.ntd1}, {"ntd2", dtn.ntd2}};
  res["c1"] = sol.c1;
  res["c2"] = sol.c2;
  res["converged_in"] = first_zero(hist.errors, hist.fixed_point.norm());
  res["errors"] = hist.errors;
  res["eigenvalues"] = complex_list(eig.eigenvalues);
  res["theoretical_spectrum"] = complex_list(theory);
  res["spectral_radius"] = num::spectral_radius(eig.eigenvalues);
  const auto& P1 = proj.p1.matrix;
  const auto& P2 = proj.p2.matrix;
  const auto X = oned::exchange_matrix();
  resid["dtn_reconstruction"] =
      std::max(num::max_abs(rebuilt.p1.matrix - P1), num::max_abs(rebuilt.p2.matrix - P2));
  resid["projector_p1"] = num::max_abs(P1 * P1 - P1);
  resid["projector_p2"] = num::max_abs(P2 * P2 - P2);
  resid["complement_identity"] =
      num::max_abs(P1 + X * P2 * X - num::DenseMatrix::Identity(2, 2));
  resid["spectrum_vs_theory"] = num::multiset_distance(eig.eigenvalues, theory);
  resid["fixed_point_vs_exact_traces"] = (hist.fixed_point - exact).norm();
  write_history(out.open("history.csv"), hist.errors);
  write_history_plot(out);
  write_spectrum_files(out, eig.eigenvalues, theory);
}

void run_schwarz_equiv(const RunConfig& cfg, nlohmann::json& res, nlohmann::json& resid,
                       Timer& timer, Artifacts& out) {
  const bounded::BoundedGeometry geom{cfg.gamma, cfg.a_of(0)};
  const bounded::SchwarzState start{1.0, 0.5, -0.75, 0.25};
  const int steps = cfg.steps.value_or(4);
  const auto rep = bounded::equivalence_check(geom, start, steps);
  // negative control: a nonzero relaxation must break the equivalence
  const num::Complex control_sigma = cfg.sigma_of(0) == 0.0 ? num::Complex(0.3) : cfg.sigma_of(0);
  const auto control = bounded::equivalence_check(geom, start, steps, control_sigma);
  timer.mark("iterate");
  res["schwarz_zero_step"] = rep.schwarz_zero_step;
  res["jacobi_zero_step"] = rep.jacobi_zero_step;
  res["deviations"] = rep.deviations;
  res["schwarz_norms"] = rep.schwarz_norms;
  res["jacobi_norms"] = rep.jacobi_norms;
  res["control_sigma"] = complex_json(control_sigma);
  res["control_max_deviation"] = control.max_deviation;
  resid["max_deviation"] = rep.max_deviation;
  auto os = out.open("history.csv");
  os << "step,schwarz_norm,jacobi_norm,deviation\n" << std::setprecision(12);
  for (std::size_t k = 0; k < rep.deviations.size(); ++k) {
    os << k << "," << rep.schwarz_norms[k] << "," << rep.jacobi_norms[k] << "," << rep.deviations[k]
       << "\n";
  }
  auto gp = out.open("history.gp");
  gp << "set datafile separator ','\nset xlabel 'iteration'\nset logscale y\nset grid\n"
        "plot 'history.csv' skip 1 using 1:($2 > 0 ? $2 : 1e-17) with linespoints title 'optimal Schwarz', \\\n"
        "     'history.csv' skip 1 using 1:($3 > 0 ? $3 : 1e-17) with linespoints title 'block Jacobi'\n";
}

// ---------------------------------------------------------------- 2D modes

bem::BoundaryMesh single_curve(const RunConfig& cfg) {
  if (cfg.geometry == "circle") return bem::make_circle(cfg.n, cfg.radius);
  if (cfg.geometry == "square") return bem::make_square(cfg.n / 4, cfg.side);
  return bem::load_mesh(cfg.mesh_file);
}

struct TwoDomain {
  bem::BoundaryMesh mesh;
  bem::DiscreteCalderon p1;
  bem::DiscreteCalderon p2;
};

TwoDomain build_two_domain(const RunConfig& cfg) {
  TwoDomain t{single_curve(cfg), {}, {}};
  const double a1 = cfg.a_of(0), a2 = cfg.a_of(1);
  t.p1 = bem::assemble_calderon_2d(t.mesh, {a1, cfg.quadrature_order}, bem::DomainSide::Interior);
  t.p2 = a1 == a2 ? bem::complement_projector(t.p1)
                  : bem::assemble_calderon_2d(t.mesh.flipped(), {a2, cfg.quadrature_order},
                                              bem::DomainSide::Exterior);
  return t;
}

struct ThreeDomain {
  bem::BoundaryMesh gamma1, gamma2;
  bem::CouplingBlocks blocks;
  bem::DiscreteCalderon p1, p2;
};

ThreeDomain build_three_domain(const RunConfig& cfg) {
  bem::ThreeDomainPreset preset;
  preset.shape = cfg.geometry == "annulus" ? bem::PresetShape::Circles : bem::PresetShape::Squares;
  preset.inner_size = cfg.inner_size;
  preset.outer_size = cfg.outer_size;
  preset.n_inner = cfg.n_inner > 0 ? cfg.n_inner : cfg.n;
  preset.n_outer = cfg.n_outer > 0 ? cfg.n_outer : cfg.n;
  auto [g1, g2] = bem::make_three_domain(preset);
  ThreeDomain t{g1, g2, {}, {}, {}};
  const double a0 = cfg.a_of(0), a1 = cfg.a_of(1), a2 = cfg.a_of(2);
  const int q = cfg.quadrature_order;
  t.blocks = bem::assemble_coupling(g1, g2, {a0, q});
  t.p1 = a1 == a0 ? bem::complement_projector(t.blocks.Pt1)
                  : bem::assemble_calderon_2d(g1, {a1, q}, bem::DomainSide::Interior);
  t.p2 = a2 == a0 ? bem::complement_projector(t.blocks.Pt2)
                  : bem::assemble_calderon_2d(g2.flipped(), {a2, q}, bem::DomainSide::Exterior);
  return t;
}

spectra::Pencil pencil_2dom(const TwoDomain& t, const std::vector<num::Complex>& sig) {
  return spectra::jacobi_2d_2dom(t.p1, t.p2, {sig});
}

spectra::Pencil pencil_3dom(const ThreeDomain& t, const std::vector<num::Complex>& sig) {
  return spectra::jacobi_2d_3dom(t.p1, t.p2, t.blocks.Pt1, t.blocks.Pt2, t.blocks.R12, t.blocks.R21,
                                 {sig});
}

double representation_residual(const bem::BoundaryMesh& mesh, const bem::DiscreteCalderon& p,
                               double a) {
  double extent = 0.0;
  for (const auto& x : mesh.nodes) extent = std::max(extent, std::hypot(x[0], x[1]));
  const Eigen::VectorXd T = bem::point_source_traces(mesh, a, {2.0 * extent + 0.5, 0.3 * extent});
  return (p.normalized() * T - T).norm() / T.norm();
}

void run_spectrum_2d(const RunConfig& cfg, nlohmann::json& res, nlohmann::json& resid, Timer& timer,
                     Artifacts& out) {
  const std::vector<num::Complex> sig = {cfg.sigma_of(0), cfg.sigma_of(1)};
  const TwoDomain t = build_two_domain(cfg);
  check_dimension(cfg, 2 * t.p1.size());
  timer.mark("assembly");
  const auto result = spectra::analyze(pencil_2dom(t, sig), sig, cfg.epsilon);
  timer.mark("eigen");
  const auto probes = bem::smooth_trace_probes(t.mesh);
  res["nodes"] = t.mesh.node_count();
  res["n_eigs"] = result.eigenvalues.size();
  res["spectral_radius"] = result.spectral_radius;
  res["theoretical_points"] = complex_list(result.theoretical_points);
  res["cluster_report"] = cluster_json(result.cluster_report);
  resid["projector_p1_smooth"] = bem::projector_defect(t.p1, probes);
  resid["projector_p2_smooth"] = bem::projector_defect(t.p2, probes);
  resid["complement_identity_smooth"] = bem::complement_defect(t.p1, t.p2, probes);
  resid["representation_p1"] = representation_residual(t.mesh, t.p1, cfg.a_of(0));
  timer.mark("residuals");
  {
    auto os = out.open("mesh.txt");
    bem::write_mesh(os, t.mesh);
  }
  write_spectrum_files(out, result.eigenvalues, result.theoretical_points);
}

void run_spectrum_2d_3dom(const RunConfig& cfg, nlohmann::json& res, nlohmann::json& resid,
                          Timer& timer, Artifacts& out) {
  const std::vector<num::Complex> sig = {cfg.sigma_of(0), cfg.sigma_of(1), cfg.sigma_of(2)};
  const ThreeDomain t = build_three_domain(cfg);
  check_dimension(cfg, 2 * (t.p1.size() + t.p2.size()));
  timer.mark("assembly");
  const auto result = spectra::analyze(pencil_3dom(t, sig), sig, cfg.epsilon);
  timer.mark("eigen");
  res["nodes_inner"] = t.gamma1.node_count();
  res["nodes_outer"] = t.gamma2.node_count();
  res["n_eigs"] = result.eigenvalues.size();
  res["spectral_radius"] = result.spectral_radius;
  res["theoretical_points"] = complex_list(result.theoretical_points);
  res["cluster_report"] = cluster_json(result.cluster_report);
  const auto cr = bem::coupling_residuals(t.blocks, t.p1, t.p2);
  resid["r21_r12"] = cr.r21_r12;
  resid["r12_r21"] = cr.r12_r21;
  resid["p1_x_r12"] = cr.p1_x_r12;
  resid["p2_x_r21"] = cr.p2_x_r21;
  resid["r12_pt2"] = cr.r12_pt2;
  resid["r21_pt1"] = cr.r21_pt1;
  resid["complement_gamma1"] = cr.complement1;
  resid["complement_gamma2"] = cr.complement2;
  timer.mark("residuals");
  {
    auto os = out.open("gamma1.txt");
    bem::write_mesh(os, t.gamma1);
  }
  {
    auto os = out.open("gamma2.txt");
    bem::write_mesh(os, t.gamma2);
  }
  write_spectrum_files(out, result.eigenvalues, result.theoretical_points);
}

void run_sweep(const RunConfig& cfg, nlohmann::json& res, nlohmann::json& resid, Timer& timer,
               Artifacts& out) {
  const auto grid = spectra::sweep_grid(cfg.sigma_min, cfg.sigma_max, cfg.sweep_steps());
  spectra::SpectrumBuilder builder;
  std::optional<TwoDomain> two;
  std::optional<ThreeDomain> three;
  const double eps = cfg.epsilon;
  if (cfg.sweep_target == "1d") {
    builder = spectra::analytic_1d_builder(cfg.a_of(0), eps);
  } else if (cfg.sweep_target == "1d-3dom") {
    const double a = cfg.a_of(0);
    builder = [a, eps](double s) {
      const auto op = oned::jacobi_operator_3dom(a, s, s, s, {});
      return spectra::analyze_eigenvalues(num::eig_dense(op.matrix).eigenvalues, {s, s, s}, eps);
    };
  } else if (cfg.sweep_target == "2d") {
    two = build_two_domain(cfg);
    check_dimension(cfg, 2 * two->p1.size());
    builder = [&two, eps](double s) {
      return spectra::analyze(pencil_2dom(*two, {s, s}), {s, s}, eps);
    };
  } else {
    three = build_three_domain(cfg);
    check_dimension(cfg, 2 * (three->p1.size() + three->p2.size()));
    builder = [&three, eps](double s) {
      return spectra::analyze(pencil_3dom(*three, {s, s, s}), {s, s, s}, eps);
    };
  }
  timer.mark("setup");
  const auto points = spectra::sigma_sweep(builder, grid);
  timer.mark("sweep");
  double worst = 0.0;
  nlohmann::json rho = nlohmann::json::array();
  for (const auto& p : points) {
    worst = std::max(worst, std::abs(p.rho - std::sqrt(std::abs(p.sigma / (1.0 + p.sigma)))));
    rho.push_back({p.sigma, p.rho, p.remainder});
  }
  res["grid_points"] = points.size();
  res["sigma_rho_remainder"] = rho;
  resid["max_deviation_from_sqrt_law"] = worst;
  {
    auto os = out.open("sweep.csv");
    spectra::write_sweep_csv(os, points);
  }
  auto gp = out.open("sweep.gp");
  gp << "set datafile separator ','\nset xlabel 'sigma'\nset ylabel 'spectral radius'\nset grid\n"
        "set samples 1000\n"
        "plot 'sweep.csv' skip 1 using 1:2 with linespoints pt 7 ps 0.4 title 'computed', \\\n"
        "     sqrt(abs(x/(1+x))) with lines dt 2 title 'sqrt|sigma/(1+sigma)|'\n";
}

}  // namespace

std::string run_id(const RunConfig& cfg) {
  // the output directory does not change results
  nlohmann::json j = to_json(cfg);
  j.erase("out");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunReport run(const RunConfig& cfg) {
  cfg.validate();
  Artifacts out(cfg.out);
  RunReport report;
  report.run_id = run_id(cfg);
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json residuals = nlohmann::json::object();
  nlohmann::json timings = nlohmann::json::object();
  Timer timer(timings);

  switch (cfg.mode) {
    case Mode::OneD2Dom: run_1d_2dom(cfg, results, residuals, timer, out); break;
    case Mode::OneD3Dom: run_1d_3dom(cfg, results, residuals, timer, out); break;
    case Mode::OneDBounded: run_1d_bounded(cfg, results, residuals, timer, out); break;
    case Mode::SchwarzEquiv: run_schwarz_equiv(cfg, results, residuals, timer, out); break;
    case Mode::Spectrum2D: run_spectrum_2d(cfg, results, residuals, timer, out); break;
    case Mode::Spectrum2D3Dom: run_spectrum_2d_3dom(cfg, results, residuals, timer, out); break;
    case Mode::Sweep: run_sweep(cfg, results, residuals, timer, out); break;
  }

  report.json["run_id"] = report.run_id;
  report.json["mode"] = mode_name(cfg.mode);
  report.json["config"] = to_json(cfg);
  report.json["results"] = results;
  report.json["residuals"] = residuals;
  report.json["timings"] = timings;
  out.add("report.json");
  report.files = out.files();
  report.json["files"] = report.files;
  std::ofstream os(out.path("report.json"));
  os << std::setw(2) << report.json << "\n";
  return report;
}

}  // namespace mtf::cli
