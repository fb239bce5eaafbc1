#include "mtf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <iomanip>

#include "mtf/errors.hpp"
#include "mtf/mtf1d.hpp"

namespace mtf::spectra {

namespace {

/// One row block of the Jacobi operator: a subdomain projector and the map
/// from the global unknown vector to the neighbour traces, X included.
struct RowBlock {
  const bem::DiscreteCalderon* proj;
  Complex sigma;
  bem::RealMatrix coupling;  // d x N
};

bem::RealMatrix exchange_into(Eigen::Index rows, Eigen::Index total, Eigen::Index row0,
                              Eigen::Index col0, Eigen::Index len) {
  // rows [row0, row0+len) pick X applied to unknowns [col0, col0+len)
  bem::RealMatrix C = bem::RealMatrix::Zero(rows, total);
  const Eigen::Index n = len / 2;
  for (Eigen::Index k = 0; k < len; ++k) C(row0 + k, col0 + k) = k < n ? 1.0 : -1.0;
  return C;
}

Pencil build_pencil(const std::vector<RowBlock>& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.proj->size();
  Pencil out{DenseMatrix::Zero(total, total), DenseMatrix::Zero(total, total)};
  Eigen::Index row = 0;
  for (const auto& b : blocks) {
    const Eigen::Index d = b.proj->size();
    const bem::RealMatrix& P = b.proj->P;
    const bem::RealMatrix& M = b.proj->M_block;
    if (b.sigma == Complex(0.0, 0.0)) {
      out.A.middleRows(row, d) = (P * b.coupling).cast<Complex>();
      out.B.block(row, row, d, d) = M.cast<Complex>();
    } else {
      out.A.middleRows(row, d) = b.sigma * (M * b.coupling).cast<Complex>();
      out.B.block(row, row, d, d) =
          (1.0 + b.sigma) * M.cast<Complex>() - P.cast<Complex>();
    }
    row += d;
  }
  return out;
}

void require_square_pair(const bem::DiscreteCalderon& p, const char* what) {
  if (p.P.rows() != p.P.cols() || p.M_block.rows() != p.P.rows() || p.P.rows() % 2 != 0) {
    throw InvalidArgument("spectra", std::string("malformed projector ") + what);
  }
}

}  // namespace

void RelaxationConfig::validate() const {
  for (const Complex& s : sigmas) oned::require_admissible_sigma(s, "spectra");
}

double ClusterReport::combined() const {
  double s = 0.0;
  for (double f : fractions) s += f;
  return s;
}

Pencil jacobi_2d_2dom(const bem::DiscreteCalderon& p1, const bem::DiscreteCalderon& p2,
                      const RelaxationConfig& cfg) {
  if (cfg.sigmas.size() != 2) throw InvalidArgument("spectra", "two-subdomain pencil needs 2 sigmas");
  cfg.validate();
  require_square_pair(p1, "P1");
  require_square_pair(p2, "P2");
  if (p1.size() != p2.size()) throw InvalidArgument("spectra", "P1 and P2 dimensions differ");
  const Eigen::Index d = p1.size();
  std::vector<RowBlock> blocks;
  blocks.push_back({&p1, cfg.sigmas[0], exchange_into(d, 2 * d, 0, d, d)});
  blocks.push_back({&p2, cfg.sigmas[1], exchange_into(d, 2 * d, 0, 0, d)});
  return build_pencil(blocks);
}

Pencil jacobi_2d_3dom(const bem::DiscreteCalderon& p1, const bem::DiscreteCalderon& p2,
                      const bem::DiscreteCalderon& pt1, const bem::DiscreteCalderon& pt2,
                      const bem::RealMatrix& r12, const bem::RealMatrix& r21,
                      const RelaxationConfig& cfg) {
  if (cfg.sigmas.size() != 3) throw InvalidArgument("spectra", "three-subdomain pencil needs 3 sigmas");
  cfg.validate();
  for (const auto* p : {&p1, &p2, &pt1, &pt2}) require_square_pair(*p, "block");
  const Eigen::Index d1 = p1.size();
  const Eigen::Index d2 = p2.size();
  if (pt1.size() != d1 || pt2.size() != d2 || r12.rows() != d1 || r12.cols() != d2 ||
      r21.rows() != d2 || r21.cols() != d1) {
    throw InvalidArgument("spectra", "three-subdomain block dimensions are inconsistent");
  }
  bem::DiscreteCalderon p0;
  p0.P.resize(d1 + d2, d1 + d2);
  p0.P << pt1.P, r12, r21, pt2.P;
  p0.M_block = bem::RealMatrix::Zero(d1 + d2, d1 + d2);
  p0.M_block.topLeftCorner(d1, d1) = pt1.M_block;
  p0.M_block.bottomRightCorner(d2, d2) = pt2.M_block;

  // unknowns [U1 | U01 | U02 | U2]
  const Eigen::Index N = 2 * (d1 + d2);
  const Eigen::Index o01 = d1, o02 = 2 * d1, o2 = 2 * d1 + d2;
  bem::RealMatrix c0 = exchange_into(d1 + d2, N, 0, 0, d1) + exchange_into(d1 + d2, N, d1, o2, d2);
  std::vector<RowBlock> blocks;
  blocks.push_back({&p1, cfg.sigmas[1], exchange_into(d1, N, 0, o01, d1)});
  blocks.push_back({&p0, cfg.sigmas[0], std::move(c0)});
  blocks.push_back({&p2, cfg.sigmas[2], exchange_into(d2, N, 0, o02, d2)});
  return build_pencil(blocks);
}

std::vector<Complex> accumulation_points(const std::vector<Complex>& sigmas) {
  std::vector<Complex> out;
  for (const Complex& p : oned::theoretical_spectrum(sigmas)) {
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const Complex& q) { return std::abs(p - q) < 1e-12; });
    if (!dup) out.push_back(p);
  }
  return out;
}

ClusterReport cluster_report(const std::vector<Complex>& eigs, const std::vector<Complex>& points,
                             double epsilon) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("spectra", "cluster radius must be nonnegative");
  ClusterReport rep;
  rep.epsilon = epsilon;
  rep.points = points;
  rep.fractions.assign(points.size(), 0.0);
  if (eigs.empty()) return rep;
  std::size_t assigned = 0;
  for (const Complex& z : eigs) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const double d = std::abs(z - points[k]);
      if (d < best) {
        best = d;
        arg = k;
      }
    }
    if (best < epsilon) {
      rep.fractions[arg] += 1.0;
      ++assigned;
    }
  }
  const double n = static_cast<double>(eigs.size());
  for (double& f : rep.fractions) f /= n;
  rep.remainder = static_cast<double>(eigs.size() - assigned) / n;
  return rep;
}

SpectrumResult analyze_eigenvalues(std::vector<Complex> eigs, const std::vector<Complex>& sigmas,
                                   double epsilon) {
  num::sort_eigenvalues(eigs);
  SpectrumResult out;
  out.spectral_radius = num::spectral_radius(eigs);
  out.theoretical_points = accumulation_points(sigmas);
  out.cluster_report = cluster_report(eigs, out.theoretical_points, epsilon);
  out.eigenvalues = std::move(eigs);
  return out;
}

SpectrumResult analyze(const Pencil& pencil, const std::vector<Complex>& sigmas, double epsilon) {
  return analyze_eigenvalues(num::eig_generalized(pencil.A, pencil.B).eigenvalues, sigmas, epsilon);
}

std::vector<double> sweep_grid(double lo, double hi, int steps) {
  if (steps < 1) throw InvalidArgument("spectra", "sweep needs at least one step");
  if (!(hi >= lo)) throw InvalidArgument("spectra", "sweep range is empty");
  std::vector<double> grid;
  for (int k = 0; k < steps; ++k) {
    const double s = steps == 1 ? lo : lo + (hi - lo) * k / (steps - 1);
    if (std::abs(s + 1.0) > 1e-12) grid.push_back(s);
  }
  return grid;
}

std::vector<SweepPoint> sigma_sweep(const SpectrumBuilder& builder, const std::vector<double>& grid) {
  std::vector<SweepPoint> out(grid.size());
  const int n = static_cast<int>(grid.size());
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) {
    try {
      const SpectrumResult r = builder(grid[k]);
      out[k] = {grid[k], r.spectral_radius, r.eigenvalues.size(), r.cluster_report.fractions,
                r.cluster_report.remainder};
    } catch (const std::exception& e) {
#pragma omp critical
      failure = e.what();
    }
  }
  if (!failure.empty()) throw NumericalError("spectra", "sweep failed: " + failure);
  std::sort(out.begin(), out.end(),
            [](const SweepPoint& a, const SweepPoint& b) { return a.sigma < b.sigma; });
  return out;
}

SpectrumBuilder analytic_1d_builder(double a, double epsilon) {
  return [a, epsilon](double sigma) {
    const auto op = oned::jacobi_operator_2dom(a, sigma, sigma, oned::JumpData{});
    return analyze_eigenvalues(num::eig_dense(op.matrix).eigenvalues, {sigma, sigma}, epsilon);
  };
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
  std::size_t clusters = 0;
  for (const auto& p : points) clusters = std::max(clusters, p.fractions.size());
  os << "sigma,rho,n_eigs";
  for (std::size_t k = 0; k < clusters; ++k) os << ",frac_cluster_" << (k + 1);
  os << ",frac_remainder\n";
  os << std::setprecision(12);
  for (const auto& p : points) {
    os << p.sigma << "," << p.rho << "," << p.n_eigs;
    for (std::size_t k = 0; k < clusters; ++k) {
      os << "," << (k < p.fractions.size() ? p.fractions[k] : 0.0);
    }
    os << "," << p.remainder << "\n";
  }
}

void write_eigenvalue_csv(std::ostream& os, const std::vector<Complex>& eigs) {
  os << "re,im\n" << std::setprecision(12);
  for (const Complex& z : eigs) os << z.real() << "," << z.imag() << "\n";
}

}  // namespace mtf::spectra
