#include "mtf/mtf1d.hpp"

#include <cmath>
#include <sstream>

#include "mtf/errors.hpp"

namespace mtf::oned {

namespace {

void require_positive_a(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream os;
    os << "material constant a must be positive and finite, got " << a;
    throw InvalidArgument("mtf1d", os.str());
  }
}

DenseMatrix X2() { return exchange_matrix(1); }

DenseMatrix id2() { return DenseMatrix::Identity(2, 2); }

// (sigma Id + P) X / (1 + sigma): the Jacobi block of a projector P.
DenseMatrix relaxed_block(const DenseMatrix& P, Complex sigma) {
  if (sigma == Complex(0.0)) return P * X2();
  return (sigma * id2() + P) * X2() / (1.0 + sigma);
}

Vector pair(double d, double n) {
  Vector v(2);
  v << d, n;
  return v;
}

}  // namespace

void require_admissible_sigma(Complex sigma, const char* module) {
  if (!std::isfinite(sigma.real()) || !std::isfinite(sigma.imag())) {
    throw InvalidArgument(module, "relaxation parameter must be finite");
  }
  if (std::abs(sigma + 1.0) == 0.0) {
    throw InvalidArgument(module,
                          "relaxation parameter sigma = -1 makes (1 + sigma) Id - P singular");
  }
}

double green_1d(double a, double x) {
  require_positive_a(a);
  return std::exp(-a * std::abs(x)) / (2.0 * a);
}

double green_1d_derivative(double a, double x) {
  require_positive_a(a);
  if (x == 0.0) throw InvalidArgument("mtf1d", "Green's function derivative is undefined at 0");
  return -std::copysign(1.0, x) * std::exp(-a * std::abs(x)) / 2.0;
}

Representation1D::Representation1D(double a, std::vector<Term> terms)
    : a_(a), terms_(std::move(terms)) {
  require_positive_a(a);
}

double Representation1D::value(double x, int side) const {
  double u = 0.0;
  for (const Term& t : terms_) {
    const double z = x - t.center;
    double sgn = z > 0.0 ? 1.0 : -1.0;
    if (z == 0.0) {
      if (side == 0) {
        throw InvalidArgument("mtf1d", "representation evaluated exactly at a jump location");
      }
      sgn = side > 0 ? 1.0 : -1.0;
    }
    const double e = std::exp(-a_ * std::abs(z));
    // beta G(z) - alpha G'(z), G'(z) = -sgn e / 2
    u += t.beta * e / (2.0 * a_) + t.alpha * sgn * e / 2.0;
  }
  return u;
}

double Representation1D::derivative(double x, int side) const {
  double du = 0.0;
  for (const Term& t : terms_) {
    const double z = x - t.center;
    double sgn = z > 0.0 ? 1.0 : -1.0;
    if (z == 0.0) {
      if (side == 0) {
        throw InvalidArgument("mtf1d", "representation evaluated exactly at a jump location");
      }
      sgn = side > 0 ? 1.0 : -1.0;
    }
    const double e = std::exp(-a_ * std::abs(z));
    // beta G'(z) - alpha G''(z), G'' = a^2 G away from the origin
    du += -t.beta * sgn * e / 2.0 - t.alpha * a_ * e / 2.0;
  }
  return du;
}

Representation1D represent_1d(double a, const JumpData& jump) {
  return Representation1D(a, {{jump.location, jump.alpha, jump.beta}});
}

Representation1D represent_1d_3dom(double a, const ThreeDomainJumps& j, double half_width) {
  if (!(half_width > 0.0)) throw InvalidArgument("mtf1d", "half width must be positive");
  // At -L the middle interval is on the right, so the value jump enters with +alpha;
  // at +L it is on the left and enters with -alpha.
  return Representation1D(a, {{-half_width, j.alpha_left, j.beta_left},
                              {half_width, -j.alpha_right, j.beta_right}});
}

Vector traces_2dom(const Representation1D& u, double c) {
  Vector t(4);
  t << u.value(c, -1), u.derivative(c, -1), u.value(c, +1), -u.derivative(c, +1);
  return t;
}

Vector traces_3dom(const Representation1D& u, double L) {
  Vector t(8);
  t << u.value(-L, -1), u.derivative(-L, -1),   // U1
      u.value(-L, +1), -u.derivative(-L, +1),   // U01
      u.value(L, -1), u.derivative(L, -1),      // U02
      u.value(L, +1), -u.derivative(L, +1);     // U2
  return t;
}

DenseMatrix exchange_matrix(int pairs) {
  DenseMatrix X = DenseMatrix::Zero(2 * pairs, 2 * pairs);
  for (int k = 0; k < pairs; ++k) {
    X(2 * k, 2 * k) = 1.0;
    X(2 * k + 1, 2 * k + 1) = -1.0;
  }
  return X;
}

CalderonProjector1D calderon_halfline(double a, Side) {
  require_positive_a(a);
  DenseMatrix A(2, 2);
  A << 0.0, 1.0 / a, a, 0.0;
  return {(id2() + A) / 2.0, a};
}

DenseMatrix coupling_matrix(double a) {
  require_positive_a(a);
  DenseMatrix R(2, 2);
  R << 0.5, 1.0 / (2.0 * a), -a / 2.0, -0.5;
  return R;
}

CalderonProjector1D calderon_middle_3dom(double a, double half_width) {
  require_positive_a(a);
  if (!(half_width > 0.0)) throw InvalidArgument("mtf1d", "half width must be positive");
  const DenseMatrix P = calderon_halfline(a, Side::Plus).matrix;
  const DenseMatrix R = coupling_matrix(a);
  const double g = green_1d(a, 2.0 * half_width);  // g_- = g_+
  DenseMatrix P0(4, 4);
  P0.topLeftCorner(2, 2) = P;
  P0.topRightCorner(2, 2) = 2.0 * a * g * R;
  P0.bottomLeftCorner(2, 2) = 2.0 * a * g * R;
  P0.bottomRightCorner(2, 2) = P;
  return {P0, a};
}

MtfSystem assemble_mtf_2dom(double a, Complex s1, Complex s2, const JumpData& jump) {
  require_positive_a(a);
  require_admissible_sigma(s1, "mtf1d");
  require_admissible_sigma(s2, "mtf1d");
  const DenseMatrix P = calderon_halfline(a, Side::Plus).matrix;
  const DenseMatrix X = X2();

  MtfSystem sys;
  sys.layout = Layout::TwoHalfLines;
  sys.sigmas = {s1, s2};
  sys.system_matrix.resize(4, 4);
  sys.system_matrix << (1.0 + s1) * id2() - P, -s1 * X, -s2 * X, (1.0 + s2) * id2() - P;
  sys.rhs.resize(4);
  sys.rhs << s1 * pair(-jump.alpha, jump.beta), s2 * pair(jump.alpha, jump.beta);
  return sys;
}

MtfSystem assemble_mtf_3dom(double a, Complex s0, Complex s1, Complex s2,
                            const ThreeDomainJumps& j, double half_width) {
  require_positive_a(a);
  for (Complex s : {s0, s1, s2}) require_admissible_sigma(s, "mtf1d");
  const DenseMatrix P = calderon_halfline(a, Side::Plus).matrix;
  const DenseMatrix X = X2();
  const DenseMatrix gR = 2.0 * a * green_1d(a, 2.0 * half_width) * coupling_matrix(a);
  const DenseMatrix Z = DenseMatrix::Zero(2, 2);

  MtfSystem sys;
  sys.layout = Layout::ThreeIntervals;
  sys.sigmas = {s0, s1, s2};
  sys.system_matrix.resize(8, 8);
  sys.system_matrix << (1.0 + s1) * id2() - P, -s1 * X, Z, Z,     //
      -s0 * X, (1.0 + s0) * id2() - P, -gR, Z,                     //
      Z, -gR, (1.0 + s0) * id2() - P, -s0 * X,                     //
      Z, Z, -s2 * X, (1.0 + s2) * id2() - P;
  sys.rhs.resize(8);
  sys.rhs << s1 * pair(-j.alpha_left, j.beta_left), s0 * pair(j.alpha_left, j.beta_left),
      s0 * pair(j.alpha_right, j.beta_right), s2 * pair(-j.alpha_right, j.beta_right);
  return sys;
}

JacobiOperator1D jacobi_operator_2dom(double a, Complex s1, Complex s2, const JumpData& jump) {
  require_positive_a(a);
  require_admissible_sigma(s1, "mtf1d");
  require_admissible_sigma(s2, "mtf1d");
  const double al = jump.alpha;
  const double be = jump.beta;
  const DenseMatrix P = calderon_halfline(a, Side::Plus).matrix;

  JacobiOperator1D op;
  op.sigmas = {s1, s2};
  op.matrix = DenseMatrix::Zero(4, 4);
  op.rhs_tilde.resize(4);

  if (s1 == Complex(0.0)) {
    op.matrix.block(0, 2, 2, 2) = P * X2();
    op.rhs_tilde.head(2) = -P * X2() * pair(al, be);
  } else {
    const Complex d = 1.0 + s1;
    op.matrix(0, 2) = (2.0 * s1 + 1.0) / (2.0 * d);
    op.matrix(0, 3) = -1.0 / (2.0 * a * d);
    op.matrix(1, 2) = a / (2.0 * d);
    op.matrix(1, 3) = -(2.0 * s1 + 1.0) / (2.0 * d);
    op.rhs_tilde(0) = -(a * al * (2.0 * s1 + 1.0) - be) / (2.0 * a * d);
    op.rhs_tilde(1) = -(a * al - be * (2.0 * s1 + 1.0)) / (2.0 * d);
  }
  if (s2 == Complex(0.0)) {
    op.matrix.block(2, 0, 2, 2) = P * X2();
    op.rhs_tilde.tail(2) = P * pair(al, be);
  } else {
    const Complex d = 1.0 + s2;
    op.matrix(2, 0) = (2.0 * s2 + 1.0) / (2.0 * d);
    op.matrix(2, 1) = -1.0 / (2.0 * a * d);
    op.matrix(3, 0) = a / (2.0 * d);
    op.matrix(3, 1) = -(2.0 * s2 + 1.0) / (2.0 * d);
    op.rhs_tilde(2) = (a * al * (2.0 * s2 + 1.0) + be) / (2.0 * a * d);
    op.rhs_tilde(3) = (a * al + be * (2.0 * s2 + 1.0)) / (2.0 * d);
  }
  return op;
}

JacobiOperator1D jacobi_operator_3dom(double a, Complex s0, Complex s1, Complex s2,
                                      const ThreeDomainJumps& j, double half_width) {
  require_positive_a(a);
  for (Complex s : {s0, s1, s2}) require_admissible_sigma(s, "mtf1d");
  if (!(half_width > 0.0)) throw InvalidArgument("mtf1d", "half width must be positive");
  const DenseMatrix P = calderon_halfline(a, Side::Plus).matrix;
  const DenseMatrix gR = 2.0 * a * green_1d(a, 2.0 * half_width) * coupling_matrix(a);

  JacobiOperator1D op;
  op.sigmas = {s0, s1, s2};
  op.matrix = DenseMatrix::Zero(8, 8);
  op.matrix.block(0, 2, 2, 2) = relaxed_block(P, s1);
  op.matrix.block(2, 0, 2, 2) = relaxed_block(P, s0);
  op.matrix.block(4, 6, 2, 2) = relaxed_block(P, s0);
  op.matrix.block(6, 4, 2, 2) = relaxed_block(P, s2);
  // ((1+s0) Id - P)^{-1} 2a g R = 2a g R / (1 + s0) because P R = 0.
  const DenseMatrix coupling = s0 == Complex(0.0) ? gR : DenseMatrix(gR / (1.0 + s0));
  op.matrix.block(2, 4, 2, 2) = coupling;
  op.matrix.block(4, 2, 2, 2) = coupling;

  auto rhs_block = [&](Complex s, double alpha, double beta) -> Vector {
    if (s == Complex(0.0)) return P * pair(alpha, beta);
    return (s * id2() + P) * pair(alpha, beta) / (1.0 + s);
  };
  op.rhs_tilde.resize(8);
  op.rhs_tilde << rhs_block(s1, -j.alpha_left, j.beta_left),
      rhs_block(s0, j.alpha_left, j.beta_left), rhs_block(s0, j.alpha_right, j.beta_right),
      rhs_block(s2, -j.alpha_right, j.beta_right);
  return op;
}

IterationHistory block_jacobi_run(const JacobiOperator1D& op, const Vector& start, int n_steps) {
  const Eigen::Index n = op.matrix.rows();
  if (op.matrix.cols() != n || op.rhs_tilde.size() != n || start.size() != n) {
    throw InvalidArgument("mtf1d", "block_jacobi_run: dimension mismatch");
  }
  if (n_steps < 0) throw InvalidArgument("mtf1d", "block_jacobi_run: negative step count");

  IterationHistory h;
  bool nilpotent_limit = true;
  for (Complex s : op.sigmas) nilpotent_limit = nilpotent_limit && s == Complex(0.0);

  if (nilpotent_limit) {
    Vector u = Vector::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) u = op.matrix * u + op.rhs_tilde;
    h.fixed_point = u;
  } else {
    const DenseMatrix lhs = DenseMatrix::Identity(n, n) - op.matrix;
    h.fixed_point = num::solve_dense(lhs, op.rhs_tilde);
  }

  Vector u = start;
  h.iterates.push_back(u);
  h.errors.push_back((u - h.fixed_point).norm());
  for (int k = 0; k < n_steps; ++k) {
    u = op.matrix * u + op.rhs_tilde;
    h.iterates.push_back(u);
    h.errors.push_back((u - h.fixed_point).norm());
  }
  return h;
}

std::vector<Complex> theoretical_spectrum(const std::vector<Complex>& sigmas) {
  std::vector<Complex> out;
  out.reserve(2 * sigmas.size());
  for (Complex s : sigmas) {
    const Complex r = std::sqrt(s / (1.0 + s));
    out.push_back(r);
    out.push_back(-r);
  }
  return out;
}

}  // namespace mtf::oned
