#pragma once

// Transmission problem -u'' + a^2 u = 0 on (0, 1) \ {gamma} with u(0) = u(1) = 0.
// Omega_1 = (0, gamma) owns (u(gamma-), u'(gamma-)); Omega_2 = (gamma, 1) owns
// (u(gamma+), -u'(gamma+)).

#include <vector>

#include "mtf/mtf1d.hpp"

namespace mtf::bounded {

using num::Complex;
using num::DenseMatrix;
using num::Vector;

struct BoundedGeometry {
  double gamma = 0.5;
  double a = 1.0;

  void validate() const;
};

struct DtnPair {
  double dtn1 = 0.0;
  double dtn2 = 0.0;
  double ntd1 = 0.0;
  double ntd2 = 0.0;
};

struct ProjectorPair {
  oned::CalderonProjector1D p1;
  oned::CalderonProjector1D p2;
};

/// Interface values of the two Schwarz iterates at gamma; du1, du2 are plain
/// x-derivatives (not outward).
struct SchwarzState {
  double u1 = 0.0;
  double du1 = 0.0;
  double u2 = 0.0;
  double du2 = 0.0;
};

/// u1 = c1 sinh(a x) on (0, gamma), u2 = c2 sinh(a (1 - x)) on (gamma, 1).
struct TransmissionSolution {
  BoundedGeometry geom;
  double c1 = 0.0;
  double c2 = 0.0;

  double value(double x, int side = 0) const;
  double derivative(double x, int side = 0) const;
};

TransmissionSolution transmission_solve_bounded(const BoundedGeometry& geom,
                                                const oned::JumpData& jump);

/// Closed-form projectors; evaluated through ratios of exponentials so that
/// large a*gamma or a*(1-gamma) cannot overflow.
ProjectorPair calderon_bounded(const BoundedGeometry& geom);

DtnPair dtn_operators(const BoundedGeometry& geom);

/// Projectors rebuilt from the Dirichlet-to-Neumann scalars.
ProjectorPair calderon_from_dtn(const DtnPair& pair);

/// Block-Jacobi operator of the bounded two-subdomain multitrace system,
/// J = [[0, (s1 Id + P1) X / (1 + s1)], [(s2 Id + P2) X / (1 + s2), 0]].
oned::JacobiOperator1D jacobi_operator_bounded(const BoundedGeometry& geom, Complex sigma1,
                                               Complex sigma2, const oned::JumpData& jump);

/// One sweep of the homogeneous optimal Schwarz method, run on Dirichlet and
/// Neumann traces at the same time.
SchwarzState schwarz_step(const DtnPair& dtn, const SchwarzState& s);

/// States s^0 .. s^n.
std::vector<SchwarzState> optimal_schwarz_run(const BoundedGeometry& geom,
                                              const SchwarzState& start, int n_steps);

/// Schwarz state written as multitrace vector [U1, U2].
Vector to_traces(const SchwarzState& s);
SchwarzState from_traces(const Vector& traces);

struct EquivalenceReport {
  std::vector<double> deviations;      // ||Schwarz^k - Jacobi^k|| per step
  std::vector<double> schwarz_norms;   // ||Schwarz^k||
  std::vector<double> jacobi_norms;    // ||Jacobi^k||
  double max_deviation = 0.0;
  int schwarz_zero_step = -1;          // first k with ||.|| <= 1e-12 ||U^0||, -1 if never
  int jacobi_zero_step = -1;
};

/// Runs optimal Schwarz and homogeneous block Jacobi (relaxation `sigma` on
/// both subdomains; zero gives the optimal multitrace iteration) from the same
/// start and compares them iterate by iterate.
EquivalenceReport equivalence_check(const BoundedGeometry& geom, const SchwarzState& start,
                                    int n_steps = 4, Complex sigma = 0.0);

}  // namespace mtf::bounded
