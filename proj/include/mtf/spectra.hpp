#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "mtf/bem/calderon2d.hpp"
#include "mtf/numkernel.hpp"

namespace mtf::spectra {

using num::Complex;
using num::DenseMatrix;

struct RelaxationConfig {
  std::vector<Complex> sigmas;

  /// Throws InvalidArgument for sigma = -1.
  void validate() const;
};

/// Generalized eigenproblem A v = lambda B v whose eigenvalues are those of
/// the block-Jacobi operator.
struct Pencil {
  DenseMatrix A;
  DenseMatrix B;
};

struct ClusterReport {
  double epsilon = 0.05;
  std::vector<Complex> points;    // distinct accumulation points
  std::vector<double> fractions;  // per point
  double remainder = 1.0;

  double combined() const;
};

struct SpectrumResult {
  std::vector<Complex> eigenvalues;
  double spectral_radius = 0.0;
  std::vector<Complex> theoretical_points;
  ClusterReport cluster_report;
};

/// Two subdomains sharing every trace; sigmas = {sigma1, sigma2}.
/// Rows with sigma_j != 0: A = sigma_j M X (neighbour), B = (1+sigma_j) M - P_j.
/// Rows with sigma_j == 0: A = P_j X (neighbour), B = M.
Pencil jacobi_2d_2dom(const bem::DiscreteCalderon& p1, const bem::DiscreteCalderon& p2,
                      const RelaxationConfig& cfg);

/// Three subdomains, unknowns [U1, U01, U02, U2]; sigmas = {sigma0, sigma1, sigma2}.
/// The middle block uses the full projector [[Pt1, R12], [R21, Pt2]].
Pencil jacobi_2d_3dom(const bem::DiscreteCalderon& p1, const bem::DiscreteCalderon& p2,
                      const bem::DiscreteCalderon& pt1, const bem::DiscreteCalderon& pt2,
                      const bem::RealMatrix& r12, const bem::RealMatrix& r21,
                      const RelaxationConfig& cfg);

/// Distinct points {+-sqrt(sigma/(1+sigma))}.
std::vector<Complex> accumulation_points(const std::vector<Complex>& sigmas);

/// Every eigenvalue is assigned to its nearest point when closer than
/// epsilon; the unassigned share is the remainder. epsilon >= 0.
ClusterReport cluster_report(const std::vector<Complex>& eigs, const std::vector<Complex>& points,
                             double epsilon);

SpectrumResult analyze(const Pencil& pencil, const std::vector<Complex>& sigmas, double epsilon);
SpectrumResult analyze_eigenvalues(std::vector<Complex> eigs, const std::vector<Complex>& sigmas,
                                   double epsilon);

struct SweepPoint {
  double sigma = 0.0;
  double rho = 0.0;
  std::size_t n_eigs = 0;
  std::vector<double> fractions;
  double remainder = 0.0;
};

/// Evenly spaced grid over [lo, hi] with any point within 1e-12 of -1 dropped.
std::vector<double> sweep_grid(double lo, double hi, int steps);

using SpectrumBuilder = std::function<SpectrumResult(double sigma)>;

/// Evaluates the builder on each grid value; results are ordered by sigma.
std::vector<SweepPoint> sigma_sweep(const SpectrumBuilder& builder, const std::vector<double>& grid);

/// Builder for the closed-form 1D two-subdomain operator with sigma1 = sigma2.
SpectrumBuilder analytic_1d_builder(double a, double epsilon = 0.05);

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);
void write_eigenvalue_csv(std::ostream& os, const std::vector<Complex>& eigs);

}  // namespace mtf::spectra
