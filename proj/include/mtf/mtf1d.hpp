#pragma once

// Closed-form multitrace machinery for -u'' + a^2 u = 0 on the real line,
// split at one point (two half-lines) or at -L and +L (three intervals).
//
// Trace conventions: a subdomain to the left of an interface point c owns the
// pair (u(c-), u'(c-)); a subdomain to the right owns (u(c+), -u'(c+)). Both
// are "value, outward derivative". The middle interval (-L, L) owns the
// quadruple (u(-L), -u'(-L), u(L), u'(L)).

#include <vector>

#include "mtf/numkernel.hpp"

namespace mtf::oned {

using num::Complex;
using num::DenseMatrix;
using num::Vector;

struct TracePair {
  double dirichlet = 0.0;
  double neumann = 0.0;
};

/// Prescribed jumps at an interface point. alpha = [u] = u(c+) - u(c-),
/// beta = [du/dx] = -u'(c+) + u'(c-).
struct JumpData {
  double alpha = 0.0;
  double beta = 0.0;
  double location = 0.0;
};

/// Jumps for the three-interval layout, in the orientation of the middle
/// interval: alpha_left = u0(-L) - u1(-L), beta_left = -u0'(-L) + u1'(-L),
/// alpha_right = u0(L) - u2(L), beta_right = u0'(L) - u2'(L).
struct ThreeDomainJumps {
  double alpha_left = 0.0;
  double beta_left = 0.0;
  double alpha_right = 0.0;
  double beta_right = 0.0;
};

enum class Side { Plus, Minus };

struct CalderonProjector1D {
  DenseMatrix matrix;
  double a = 1.0;
};

enum class Layout { TwoHalfLines, ThreeIntervals, BoundedInterval };

/// Multitrace system in block form. Unknown ordering: [U1, U2] for two
/// subdomains, [U1, U01, U02, U2] for three.
struct MtfSystem {
  DenseMatrix system_matrix;
  Vector rhs;
  std::vector<Complex> sigmas;
  Layout layout = Layout::TwoHalfLines;
};

/// Block-Jacobi iteration U <- J U + rhs_tilde.
struct JacobiOperator1D {
  DenseMatrix matrix;
  Vector rhs_tilde;
  std::vector<Complex> sigmas;
};

struct IterationHistory {
  std::vector<Vector> iterates;  // U^0 ... U^n
  std::vector<double> errors;    // ||U^k - U*||_2
  Vector fixed_point;
};

double green_1d(double a, double x);
double green_1d_derivative(double a, double x);

/// Solution built from layer terms beta_k G(x - c_k) - alpha_k G'(x - c_k).
class Representation1D {
 public:
  struct Term {
    double center;
    double alpha;
    double beta;
  };

  Representation1D(double a, std::vector<Term> terms);

  /// side = +1 / -1 selects the one-sided limit when x sits on a center;
  /// side = 0 there throws.
  double value(double x, int side = 0) const;
  double derivative(double x, int side = 0) const;
  double operator()(double x) const { return value(x); }

  double a() const { return a_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  double a_;
  std::vector<Term> terms_;
};

Representation1D represent_1d(double a, const JumpData& jump);
Representation1D represent_1d_3dom(double a, const ThreeDomainJumps& jumps,
                                   double half_width = 1.0);

/// Exact traces [U1, U2] of a two-subdomain solution at `location`.
Vector traces_2dom(const Representation1D& u, double location = 0.0);
/// Exact traces [U1, U01, U02, U2] of a three-interval solution.
Vector traces_3dom(const Representation1D& u, double half_width = 1.0);

/// X = diag(1, -1) repeated over `pairs` trace pairs.
DenseMatrix exchange_matrix(int pairs = 1);

/// (Id + A)/2, A = [[0, 1/a], [a, 0]]; identical for both half-lines.
CalderonProjector1D calderon_halfline(double a, Side side);

/// R = [[1/2, 1/(2a)], [-a/2, -1/2]]; satisfies P R = 0, R P = R, R^2 = 0.
DenseMatrix coupling_matrix(double a);

/// Calderon projector of the middle interval (-L, L):
/// [[P, 2a g R], [2a g R, P]] with g = G(2L).
CalderonProjector1D calderon_middle_3dom(double a, double half_width = 1.0);

MtfSystem assemble_mtf_2dom(double a, Complex sigma1, Complex sigma2, const JumpData& jump);
MtfSystem assemble_mtf_3dom(double a, Complex sigma0, Complex sigma1, Complex sigma2,
                            const ThreeDomainJumps& jumps, double half_width = 1.0);

/// Explicit 4x4 block-Jacobi operator and right-hand side of the
/// two-subdomain system. Relaxation zero is taken as the limit
/// [[0, PX], [PX, 0]], never by dividing by sigma.
JacobiOperator1D jacobi_operator_2dom(double a, Complex sigma1, Complex sigma2,
                                      const JumpData& jump);

/// 8x8 block-Jacobi operator for [U1, U01, U02, U2].
JacobiOperator1D jacobi_operator_3dom(double a, Complex sigma0, Complex sigma1, Complex sigma2,
                                      const ThreeDomainJumps& jumps, double half_width = 1.0);

/// Runs U^{k+1} = J U^k + F for n_steps and records the distance to the fixed
/// point. With all relaxations zero the fixed point is obtained by running
/// the nilpotent iteration to completion, otherwise by solving (Id - J) U = F.
IterationHistory block_jacobi_run(const JacobiOperator1D& op, const Vector& start, int n_steps);

/// Closed-form spectrum {+-sqrt(sigma/(1+sigma))} for each relaxation.
std::vector<Complex> theoretical_spectrum(const std::vector<Complex>& sigmas);

void require_admissible_sigma(Complex sigma, const char* module);

}  // namespace mtf::oned
