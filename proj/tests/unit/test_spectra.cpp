#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mtf/errors.hpp"
#include "mtf/mtf1d.hpp"
#include "mtf/spectra.hpp"

using namespace mtf;
using namespace mtf::spectra;

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

// largest distance from -z to the spectrum, over all z
double symmetry_defect(const std::vector<Complex>& e) {
  double worst = 0.0;
  for (const auto& z : e) {
    double best = 1e300;
    for (const auto& w : e) best = std::min(best, std::abs(w + z));
    worst = std::max(worst, best);
  }
  return worst;
}

bem::DiscreteCalderon halfline(double a) {
  return bem::from_dense(oned::calderon_halfline(a, oned::Side::Plus).matrix);
}

std::vector<Complex> pencil_eigs(const Pencil& p) { return num::eig_generalized(p.A, p.B).eigenvalues; }

double cluster_fraction_circle(int n, double sigma) {
  const auto mesh = bem::make_circle(n);
  const auto p1 = bem::assemble_calderon_2d(mesh, {1.0, 8}, bem::DomainSide::Interior);
  const auto p2 = bem::complement_projector(p1);
  return analyze(jacobi_2d_2dom(p1, p2, {{sigma, sigma}}), {sigma, sigma}, 0.05).cluster_report.combined();
}

}  // namespace

TEST_CASE("pencil on analytic 1D projectors matches the closed form") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ds(-0.9, 3.0);
  for (int t = 0; t < 30; ++t) {
    const double a = 0.5 + 3.0 * std::abs(ds(rng)), s1 = ds(rng), s2 = ds(rng);
    const auto p = halfline(a);
    const auto e = pencil_eigs(jacobi_2d_2dom(p, p, {{s1, s2}}));
    CHECK(num::multiset_distance(e, law({s1, s2})) < 1e-10);
    const auto x = num::eig_dense(oned::jacobi_operator_2dom(a, s1, s2, {}).matrix).eigenvalues;
    CHECK(num::multiset_distance(e, x) < 1e-10);
  }
}

TEST_CASE("nilpotent limit through the pencil path") {
  const auto p = halfline(1.0);
  for (const auto& z : pencil_eigs(jacobi_2d_2dom(p, p, {{0.0, 0.0}}))) CHECK(std::abs(z) < 1e-7);
}

TEST_CASE("three-subdomain pencil on analytic 1D blocks") {
  const double a = 1.1;
  const DenseMatrix P0 = oned::calderon_middle_3dom(a).matrix;
  const auto p = halfline(a);
  const auto pt1 = bem::from_dense(P0.topLeftCorner(2, 2));
  const auto pt2 = bem::from_dense(P0.bottomRightCorner(2, 2));
  const bem::RealMatrix r12 = P0.topRightCorner(2, 2).real();
  const bem::RealMatrix r21 = P0.bottomLeftCorner(2, 2).real();
  const std::vector<Complex> s = {-0.4, 1.0, 0.25};
  const auto e = pencil_eigs(jacobi_2d_3dom(p, p, pt1, pt2, r12, r21, {s}));
  // the middle block holds two trace pairs
  CHECK(num::multiset_distance(e, law({s[0], s[0], s[1], s[2]})) < 1e-10);
  const auto x = num::eig_dense(oned::jacobi_operator_3dom(a, s[0], s[1], s[2], {}).matrix).eigenvalues;
  CHECK(num::multiset_distance(e, x) < 1e-10);

  // equal sigma: J^2 has the single eigenvalue sigma/(1+sigma); J itself is
  // defective there, so eigenvalues are resolved only to about sqrt(eps)
  const auto eq = pencil_eigs(jacobi_2d_3dom(p, p, pt1, pt2, r12, r21, {{0.25, 0.25, 0.25}}));
  Complex mean_sq = 0.0;
  for (const auto& z : eq) {
    CHECK(std::abs(z * z - 0.2) < 1e-7);
    mean_sq += z * z / double(eq.size());
  }
  CHECK(std::abs(mean_sq - 0.2) < 1e-12);
}

TEST_CASE("bad relaxation and shapes") {
  const auto p = halfline(1.0);
  CHECK_THROWS_AS(jacobi_2d_2dom(p, p, {{-1.0, 0.1}}), InvalidArgument);
  CHECK_THROWS_AS(jacobi_2d_2dom(p, p, {{0.1}}), InvalidArgument);
  const auto big = bem::from_dense(DenseMatrix::Identity(4, 4));
  CHECK_THROWS_AS(jacobi_2d_2dom(p, big, {{0.1, 0.1}}), InvalidArgument);
  const RelaxationConfig bad{{0.2, -1.0}};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("accumulation points and cluster_report") {
  const auto pts = accumulation_points({0.1, 0.1});
  REQUIRE(pts.size() == 2);
  const auto e = num::eig_dense(oned::jacobi_operator_2dom(1.0, 0.1, 0.1, {}).matrix).eigenvalues;
  const auto r = cluster_report(e, pts, 1e-9);
  CHECK(r.combined() == doctest::Approx(1.0));
  CHECK(r.remainder == 0.0);
  CHECK(r.fractions[0] == doctest::Approx(0.5));

  const std::vector<Complex> noisy = {0.3015, -0.3016, 0.9};
  const auto z = cluster_report(noisy, pts, 0.0);
  CHECK(z.combined() == 0.0);
  CHECK(z.remainder == 1.0);
  const auto w = cluster_report(noisy, pts, 0.05);
  CHECK(w.combined() == doctest::Approx(2.0 / 3.0));
  CHECK(w.remainder == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(cluster_report(noisy, pts, -1.0), InvalidArgument);
}

TEST_CASE("sweep grid and analytic sweep") {
  const auto g = sweep_grid(-0.9, 2.0, 100);
  CHECK(g.size() == 100);
  CHECK(g.front() == -0.9);
  CHECK(g.back() == doctest::Approx(2.0));
  const auto g2 = sweep_grid(-2.0, 0.0, 3);
  CHECK(g2.size() == 2);
  CHECK_THROWS_AS(sweep_grid(1.0, 0.0, 5), InvalidArgument);

  const auto pts = sigma_sweep(analytic_1d_builder(1.0), {1.0, -0.5, 0.0, -0.6});
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].sigma == -0.6);
  CHECK(std::abs(pts[0].rho - std::sqrt(1.5)) < 1e-10);
  CHECK(std::abs(pts[1].rho - 1.0) < 1e-10);
  CHECK(pts[2].rho < 1e-7);
  CHECK(std::abs(pts[3].rho - std::sqrt(0.5)) < 1e-10);

  std::ostringstream csv;
  write_sweep_csv(csv, pts);
  CHECK(csv.str().rfind("sigma,rho,n_eigs,frac_cluster_1,frac_cluster_2,frac_remainder\n", 0) == 0);
  std::ostringstream ecsv;
  write_eigenvalue_csv(ecsv, {Complex(1, 2)});
  CHECK(ecsv.str() == "re,im\n1,2\n");
}

TEST_CASE("2D spectrum is symmetric and clusters") {
  const auto mesh = bem::make_circle(32);
  const auto p1 = bem::assemble_calderon_2d(mesh, {1.0, 8}, bem::DomainSide::Interior);
  const auto p2 = bem::assemble_calderon_2d(mesh.flipped(), {5.0, 8}, bem::DomainSide::Exterior);
  const auto e = pencil_eigs(jacobi_2d_2dom(p1, p2, {{-0.4, 1.0}}));
  CHECK(symmetry_defect(e) < 1e-8);
  const auto r = analyze_eigenvalues(e, {-0.4, 1.0}, 0.1);
  CHECK(r.theoretical_points.size() == 4);
  CHECK(r.cluster_report.combined() + r.cluster_report.remainder == doctest::Approx(1.0));
}

TEST_CASE("clustering does not degrade under refinement") {
  const double f64 = cluster_fraction_circle(64, 0.1);
  const double f128 = cluster_fraction_circle(128, 0.1);
  const double f256 = cluster_fraction_circle(256, 0.1);
  CHECK(f128 >= f64 - 0.02);
  CHECK(f256 >= f128 - 0.02);
  CHECK(f256 >= 0.8);
}
