#include "mtf/bounded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mtf/errors.hpp"

namespace mtf::bounded {

namespace {

// 1 + e^{-2x} and 1 - e^{-2x}: cosh(x) and sinh(x) with the factor e^x / 2 removed.
double ch_scaled(double x) { return 1.0 + std::exp(-2.0 * x); }
double sh_scaled(double x) { return -std::expm1(-2.0 * x); }

// f(p) g(q) / sinh(p + q) for f, g in {cosh, sinh}, given as scaled values.
double over_sinh_sum(double fp, double gq, double p, double q) {
  return fp * gq / (2.0 * sh_scaled(p + q));
}

DenseMatrix projector(double a, double p, double q) {
  // [[c(p) s(q), s(p) s(q) / a], [a c(p) c(q), s(p) c(q)]] / sinh(p + q)
  DenseMatrix P(2, 2);
  P(0, 0) = over_sinh_sum(ch_scaled(p), sh_scaled(q), p, q);
  P(0, 1) = over_sinh_sum(sh_scaled(p), sh_scaled(q), p, q) / a;
  P(1, 0) = a * over_sinh_sum(ch_scaled(p), ch_scaled(q), p, q);
  P(1, 1) = over_sinh_sum(sh_scaled(p), ch_scaled(q), p, q);
  return P;
}

}  // namespace

void BoundedGeometry::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    std::ostringstream os;
    os << "interface position gamma must lie in (0, 1), got " << gamma;
    throw InvalidArgument("mtf1d_bounded", os.str());
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream os;
    os << "material constant a must be positive, got " << a;
    throw InvalidArgument("mtf1d_bounded", os.str());
  }
}

double TransmissionSolution::value(double x, int side) const {
  const bool left = x < geom.gamma || (x == geom.gamma && side < 0);
  if (x == geom.gamma && side == 0) {
    throw InvalidArgument("mtf1d_bounded", "solution evaluated exactly at the interface");
  }
  return left ? c1 * std::sinh(geom.a * x) : c2 * std::sinh(geom.a * (1.0 - x));
}

double TransmissionSolution::derivative(double x, int side) const {
  const bool left = x < geom.gamma || (x == geom.gamma && side < 0);
  if (x == geom.gamma && side == 0) {
    throw InvalidArgument("mtf1d_bounded", "solution evaluated exactly at the interface");
  }
  return left ? c1 * geom.a * std::cosh(geom.a * x)
              : -c2 * geom.a * std::cosh(geom.a * (1.0 - x));
}

TransmissionSolution transmission_solve_bounded(const BoundedGeometry& g,
                                                const oned::JumpData& jump) {
  g.validate();
  const double p = g.a * g.gamma;
  const double q = g.a * (1.0 - g.gamma);
  const double D = g.a * std::sinh(g.a);  // a [cosh(q) sinh(p) + sinh(q) cosh(p)]
  TransmissionSolution sol;
  sol.geom = g;
  sol.c1 = (-g.a * std::cosh(q) * jump.alpha + std::sinh(q) * jump.beta) / D;
  sol.c2 = (g.a * std::cosh(p) * jump.alpha + std::sinh(p) * jump.beta) / D;
  return sol;
}

ProjectorPair calderon_bounded(const BoundedGeometry& g) {
  g.validate();
  const double p = g.a * g.gamma;
  const double q = g.a * (1.0 - g.gamma);
  return {{projector(g.a, q, p), g.a}, {projector(g.a, p, q), g.a}};
}

DtnPair dtn_operators(const BoundedGeometry& g) {
  g.validate();
  const double p = g.a * g.gamma;
  const double q = g.a * (1.0 - g.gamma);
  DtnPair d;
  d.dtn1 = g.a * ch_scaled(p) / sh_scaled(p);
  d.dtn2 = g.a * ch_scaled(q) / sh_scaled(q);
  d.ntd1 = sh_scaled(p) / (g.a * ch_scaled(p));
  d.ntd2 = sh_scaled(q) / (g.a * ch_scaled(q));
  return d;
}

ProjectorPair calderon_from_dtn(const DtnPair& d) {
  if (!(d.dtn1 > 0.0 && d.dtn2 > 0.0 && d.ntd1 > 0.0 && d.ntd2 > 0.0)) {
    throw InvalidArgument("mtf1d_bounded", "DtN and NtD values must be positive");
  }
  const double sd = d.dtn1 + d.dtn2;
  const double sn = d.ntd1 + d.ntd2;
  DenseMatrix P1(2, 2), P2(2, 2);
  P1 << d.dtn2 / sd, 1.0 / sd, 1.0 / sn, d.ntd2 / sn;
  P2 << d.dtn1 / sd, 1.0 / sd, 1.0 / sn, d.ntd1 / sn;
  // a is not recoverable from the DtN scalars alone.
  return {{P1, 0.0}, {P2, 0.0}};
}

oned::JacobiOperator1D jacobi_operator_bounded(const BoundedGeometry& g, Complex s1,
                                               Complex s2, const oned::JumpData& jump) {
  oned::require_admissible_sigma(s1, "mtf1d_bounded");
  oned::require_admissible_sigma(s2, "mtf1d_bounded");
  const ProjectorPair pp = calderon_bounded(g);
  const DenseMatrix X = oned::exchange_matrix(1);
  const DenseMatrix I = DenseMatrix::Identity(2, 2);

  auto block = [&](const DenseMatrix& P, Complex s) -> DenseMatrix {
    if (s == Complex(0.0)) return P * X;
    return (s * I + P) * X / (1.0 + s);
  };
  Vector minus_x(2), plus(2);
  minus_x << -jump.alpha, jump.beta;
  plus << jump.alpha, jump.beta;

  oned::JacobiOperator1D op;
  op.sigmas = {s1, s2};
  op.matrix = DenseMatrix::Zero(4, 4);
  op.matrix.block(0, 2, 2, 2) = block(pp.p1.matrix, s1);
  op.matrix.block(2, 0, 2, 2) = block(pp.p2.matrix, s2);
  op.rhs_tilde.resize(4);
  op.rhs_tilde.head(2) = s1 == Complex(0.0) ? Vector(pp.p1.matrix * minus_x)
                                            : Vector((s1 * I + pp.p1.matrix) * minus_x / (1.0 + s1));
  op.rhs_tilde.tail(2) = s2 == Complex(0.0) ? Vector(pp.p2.matrix * plus)
                                            : Vector((s2 * I + pp.p2.matrix) * plus / (1.0 + s2));
  return op;
}

SchwarzState schwarz_step(const DtnPair& d, const SchwarzState& s) {
  const double sd = d.dtn1 + d.dtn2;
  const double sn = d.ntd1 + d.ntd2;
  SchwarzState next;
  // Omega_1: du1 + DtN2 u1 = du2 + DtN2 u2, written for the Dirichlet and the
  // Neumann trace separately.
  next.u1 = (s.du2 + d.dtn2 * s.u2) / sd;
  next.du1 = (d.ntd2 * s.du2 + s.u2) / sn;
  // Omega_2: -du2 + DtN1 u2 = -du1 + DtN1 u1, with -du2 = DtN2 u2.
  next.u2 = (-s.du1 + d.dtn1 * s.u1) / sd;
  const double outward = (d.ntd1 * (-s.du1) + s.u1) / sn;
  next.du2 = -outward;
  return next;
}

std::vector<SchwarzState> optimal_schwarz_run(const BoundedGeometry& g, const SchwarzState& start,
                                              int n_steps) {
  if (n_steps < 0) throw InvalidArgument("mtf1d_bounded", "negative step count");
  const DtnPair d = dtn_operators(g);
  std::vector<SchwarzState> out{start};
  for (int k = 0; k < n_steps; ++k) out.push_back(schwarz_step(d, out.back()));
  return out;
}

Vector to_traces(const SchwarzState& s) {
  Vector U(4);
  U << s.u1, s.du1, s.u2, -s.du2;
  return U;
}

SchwarzState from_traces(const Vector& U) {
  if (U.size() != 4) throw InvalidArgument("mtf1d_bounded", "trace vector must have length 4");
  return {U(0).real(), U(1).real(), U(2).real(), -U(3).real()};
}

EquivalenceReport equivalence_check(const BoundedGeometry& g, const SchwarzState& start,
                                    int n_steps, Complex sigma) {
  const auto schwarz = optimal_schwarz_run(g, start, n_steps);
  const auto op = jacobi_operator_bounded(g, sigma, sigma, oned::JumpData{});
  const Vector U0 = to_traces(start);
  const double scale = std::max(U0.norm(), 1e-300);

  EquivalenceReport rep;
  Vector U = U0;
  for (int k = 0; k <= n_steps; ++k) {
    if (k > 0) U = op.matrix * U + op.rhs_tilde;
    const Vector S = to_traces(schwarz[k]);
    rep.deviations.push_back((S - U).norm());
    rep.schwarz_norms.push_back(S.norm());
    rep.jacobi_norms.push_back(U.norm());
    rep.max_deviation = std::max(rep.max_deviation, rep.deviations.back());
    if (rep.schwarz_zero_step < 0 && S.norm() <= 1e-12 * scale) rep.schwarz_zero_step = k;
    if (rep.jacobi_zero_step < 0 && U.norm() <= 1e-12 * scale) rep.jacobi_zero_step = k;
  }
  return rep;
}

}  // namespace mtf::bounded
