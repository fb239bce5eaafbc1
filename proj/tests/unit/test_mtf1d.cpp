#include <doctest.h>

#include <cmath>
#include <random>

#include "mtf/errors.hpp"
#include "mtf/mtf1d.hpp"

using namespace mtf;
using namespace mtf::oned;

namespace {

std::vector<Complex> law(const std::vector<Complex>& sigmas) {
  std::vector<Complex> out;
  for (const auto& s : sigmas) {
    const Complex r = std::sqrt(s / (1.0 + s));
    out.push_back(r);
    out.push_back(-r);
  }
  return out;
}

DenseMatrix real_mat(std::initializer_list<std::initializer_list<double>> rows) {
  DenseMatrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// -u'' + a^2 u by central differences
double fd_residual(const Representation1D& u, double x, double h) {
  const double d2 = (u(x + h) - 2.0 * u(x) + u(x - h)) / (h * h);
  return -d2 + u.a() * u.a() * u(x);
}

}  // namespace

TEST_CASE("green_1d values") {
  CHECK(green_1d(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(green_1d(1.0, 2.0) - 0.0676676416183063) < 1e-15);
  CHECK(std::abs(green_1d(2.0, -1.0) - std::exp(-2.0) / 4.0) < 1e-16);
  CHECK_THROWS_AS(green_1d(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(green_1d(-1.0, 1.0), InvalidArgument);
}

TEST_CASE("represent_1d: single jumps") {
  const auto u = represent_1d(1.0, {0.0, 1.0, 0.0});
  CHECK(std::abs(u(1.0) - std::exp(-1.0) / 2.0) < 1e-15);
  const auto v = represent_1d(1.0, {1.0, 0.0, 0.0});
  CHECK(std::abs(v(0.5) - 0.303265329856317) < 1e-14);
  CHECK(std::abs(v(-0.5) + 0.303265329856317) < 1e-14);
  const auto z = represent_1d(1.0, {0.0, 0.0, 0.0});
  CHECK(z(0.3) == 0.0);
  CHECK_THROWS_AS(u.value(0.0), InvalidArgument);
}

TEST_CASE("represent_1d: PDE residual and jumps for random data") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::uniform_real_distribution<double> da(0.3, 3.0);
  for (int t = 0; t < 20; ++t) {
    const double a = da(rng), alpha = d(rng), beta = d(rng), c = d(rng);
    const auto u = represent_1d(a, {alpha, beta, c});
    for (double off : {-1.3, -0.4, 0.35, 1.1}) {
      const double x = c + off;
      const double r1 = std::abs(fd_residual(u, x, 1e-2));
      const double r2 = std::abs(fd_residual(u, x, 5e-3));
      CHECK(r2 < 0.3 * r1 + 1e-9);  // O(h^2)
    }
    CHECK(std::abs(u.value(c, +1) - u.value(c, -1) - alpha) < 1e-10);
    CHECK(std::abs(u.derivative(c, -1) - u.derivative(c, +1) - beta) < 1e-10);
  }
}

TEST_CASE("calderon_halfline") {
  const auto p = calderon_halfline(1.0, Side::Plus);
  CHECK(num::max_abs(p.matrix - real_mat({{0.5, 0.5}, {0.5, 0.5}})) == 0.0);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> la(std::log(0.01), std::log(100.0));
  for (int t = 0; t < 100; ++t) {
    const double a = std::exp(la(rng));
    const auto pp = calderon_halfline(a, Side::Plus);
    const auto pm = calderon_halfline(a, Side::Minus);
    CHECK(num::max_abs(pp.matrix - pm.matrix) == 0.0);
    const DenseMatrix A = 2.0 * pp.matrix - DenseMatrix::Identity(2, 2);
    CHECK(num::max_abs(A * A - DenseMatrix::Identity(2, 2)) < 1e-13);
    CHECK(num::max_abs(pp.matrix * pp.matrix - pp.matrix) < 1e-13 * std::max(1.0, a));
    const auto p0 = calderon_middle_3dom(a);
    CHECK(num::max_abs(p0.matrix * p0.matrix - p0.matrix) < 1e-13 * std::max(1.0, a));
  }
  CHECK_THROWS_AS(calderon_halfline(0.0, Side::Plus), InvalidArgument);
}

TEST_CASE("traces of the representation are fixed by the projectors") {
  const double a = 1.7;
  const JumpData jump{0.8, -0.3, 0.0};
  const auto u = represent_1d(a, jump);
  const Vector U = traces_2dom(u);
  const auto P = calderon_halfline(a, Side::Plus).matrix;
  CHECK(num::max_abs(P * U.head(2) - U.head(2)) < 1e-14);
  CHECK(num::max_abs(P * U.tail(2) - U.tail(2)) < 1e-14);
  Vector h(2);
  h << -jump.alpha, jump.beta;
  CHECK(num::max_abs(U.head(2) - exchange_matrix() * U.tail(2) - h) < 1e-14);
}

TEST_CASE("coupling matrix and middle projector") {
  const double a = 1.0;
  const DenseMatrix R = coupling_matrix(a);
  const DenseMatrix P = calderon_halfline(a, Side::Plus).matrix;
  CHECK(num::max_abs(P * R) < 1e-15);
  CHECK(num::max_abs(R * P - R) < 1e-15);
  CHECK(num::max_abs(R * R) < 1e-15);
  const auto p0 = calderon_middle_3dom(a);
  CHECK(std::abs(p0.matrix(0, 2).real() / R(0, 0).real() - std::exp(-2.0)) < 1e-15);
  CHECK(std::abs(std::exp(-2.0) - 0.135335283236613) < 1e-14);
}

TEST_CASE("represent_1d_3dom") {
  const double a = 1.3;
  const auto z = represent_1d_3dom(a, {});
  CHECK(z(0.2) == 0.0);
  const auto g = represent_1d_3dom(a, {0.0, 1.0, 0.0, 0.0});
  for (double x : {-0.5, 0.0, 0.7, 2.5}) CHECK(std::abs(g(x) - green_1d(a, x + 1.0)) < 1e-15);

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const ThreeDomainJumps j{d(rng), d(rng), d(rng), d(rng)};
  const auto u = represent_1d_3dom(a, j);
  const Vector T = traces_3dom(u);
  Vector jv(4);
  jv << j.alpha_left, j.beta_left, j.alpha_right, j.beta_right;
  const DenseMatrix P0 = calderon_middle_3dom(a).matrix;
  CHECK(num::max_abs(P0 * jv - T.segment(2, 4)) < 1e-14);
  CHECK_THROWS_AS(u.value(1.0), InvalidArgument);
}

TEST_CASE("assemble_mtf_2dom: consistency with the exact solution") {
  const double a = 0.9;
  const JumpData jump{0.7, 1.2, 0.0};
  const auto sys = assemble_mtf_2dom(a, 0.4, Complex(0.2, 0.1), jump);
  const Vector U = num::solve_dense(sys.system_matrix, sys.rhs);
  CHECK((sys.system_matrix * U - sys.rhs).norm() < 1e-12);
  const Vector exact = traces_2dom(represent_1d(a, jump));
  CHECK(num::max_abs(U - exact) < 1e-12);

  const auto zero = assemble_mtf_2dom(a, 0.0, 0.0, jump);
  CHECK(zero.rhs.norm() == 0.0);
  CHECK_THROWS_AS(assemble_mtf_2dom(a, -1.0, 0.1, jump), InvalidArgument);
}

TEST_CASE("jacobi_operator_2dom") {
  const auto j0 = jacobi_operator_2dom(1.0, 0.0, 0.0, {});
  const DenseMatrix expect = real_mat({{0, 0, .5, -.5}, {0, 0, .5, -.5}, {.5, -.5, 0, 0}, {.5, -.5, 0, 0}});
  CHECK(num::max_abs(j0.matrix - expect) < 1e-15);
  CHECK(num::max_abs(j0.matrix * j0.matrix) <= 1e-13);

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> ds(-0.9, 3.0);
  for (int t = 0; t < 100; ++t) {
    double s1 = ds(rng), s2 = ds(rng);
    if (std::abs(s1) < 1e-3) s1 = 0.5;
    if (std::abs(s2) < 1e-3) s2 = 0.5;
    const auto op = jacobi_operator_2dom(2.3, s1, s2, {});
    const auto e = num::eig_dense(op.matrix).eigenvalues;
    CHECK(num::multiset_distance(e, law({s1, s2})) < 1e-10);
    if (s1 < 0 && s2 < 0)
      for (const auto& z : e) CHECK(std::abs(z.real()) < 1e-10);
  }
  CHECK_THROWS_AS(jacobi_operator_2dom(1.0, 0.1, -1.0, {}), InvalidArgument);
}

TEST_CASE("jacobi fixed point solves the MTF system") {
  const double a = 1.4;
  const JumpData jump{0.3, -0.8, 0.0};
  const auto op = jacobi_operator_2dom(a, 0.5, 2.0, jump);
  const Vector Ustar = num::solve_dense(DenseMatrix::Identity(4, 4) - op.matrix, op.rhs_tilde);
  CHECK(num::max_abs(Ustar - traces_2dom(represent_1d(a, jump))) < 1e-12);
}

TEST_CASE("block_jacobi_run") {
  const JumpData jump{1.0, 0.5, 0.0};
  Vector start = Vector::Zero(4);
  start << 0.3, -1.0, 2.0, 0.1;
  const auto h0 = block_jacobi_run(jacobi_operator_2dom(1.0, 0.0, 0.0, jump), start, 3);
  CHECK(h0.errors[2] <= 1e-12);
  CHECK(num::max_abs(h0.fixed_point - traces_2dom(represent_1d(1.0, jump))) < 1e-12);

  const auto op = jacobi_operator_2dom(1.0, 0.1, 0.1, jump);
  const auto h = block_jacobi_run(op, start, 8);
  for (int k = 2; k <= 8; k += 2) {
    const double ratio = h.errors[k] / h.errors[k - 2];
    CHECK(std::abs(ratio - 0.1 / 1.1) < 1e-6);
  }
  const auto hs = block_jacobi_run(op, h.fixed_point, 3);
  for (double e : hs.errors) CHECK(e < 1e-14);
}

TEST_CASE("jacobi_operator_3dom") {
  const auto j0 = jacobi_operator_3dom(1.0, 0.0, 0.0, 0.0, {});
  const DenseMatrix J4 = j0.matrix * j0.matrix * j0.matrix * j0.matrix;
  CHECK(num::max_abs(J4) <= 1e-13);
  CHECK(num::max_abs(j0.matrix * j0.matrix * j0.matrix) > 1e-3);

  const auto e = num::eig_dense(jacobi_operator_3dom(1.0, 0.25, 0.25, 0.25, {}).matrix).eigenvalues;
  // repeated eigenvalues are only resolved to about sqrt(machine eps) times the block size
  for (const auto& z : e) CHECK(std::abs(std::abs(z) - 0.447213595499958) < 1e-7);

  const std::vector<Complex> s = {-0.4, 1.0, 0.25};
  const auto ea = num::eig_dense(jacobi_operator_3dom(1.0, s[0], s[1], s[2], {}).matrix).eigenvalues;
  const auto eb = num::eig_dense(jacobi_operator_3dom(7.0, s[0], s[1], s[2], {}).matrix).eigenvalues;
  CHECK(num::multiset_distance(ea, eb) < 1e-10);
  CHECK(num::multiset_distance(ea, law({s[0], s[0], s[1], s[2]})) < 1e-10);

  const ThreeDomainJumps jumps{0.5, -0.2, 1.0, 0.7};
  Vector start = Vector::Constant(8, 1.0);
  const auto h = block_jacobi_run(jacobi_operator_3dom(1.2, 0.0, 0.0, 0.0, jumps), start, 5);
  CHECK(h.errors[4] <= 1e-12);
  CHECK(num::max_abs(h.fixed_point - traces_3dom(represent_1d_3dom(1.2, jumps))) < 1e-12);
}

TEST_CASE("theoretical_spectrum and admissibility") {
  const auto t = theoretical_spectrum({0.1});
  REQUIRE(t.size() == 2);
  CHECK(std::abs(std::abs(t[0]) - 0.301511344577764) < 1e-14);
  CHECK_THROWS_AS(require_admissible_sigma(-1.0, "mtf1d"), InvalidArgument);
  CHECK_NOTHROW(require_admissible_sigma(Complex(-1.0, 1e-3), "mtf1d"));
}
