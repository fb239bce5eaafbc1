#include "mtf/bem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mtf/errors.hpp"

namespace mtf::bem {

namespace {

// Golub-Welsch: nodes/weights from a symmetric Jacobi matrix.
Rule from_jacobi(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta_sqrt, double mu0) {
  const Eigen::Index n = alpha.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    J(i, i) = alpha(i);
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = beta_sqrt(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    r.w[i] = mu0 * v0 * v0;
  }
  return r;
}

}  // namespace

Rule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("bem2d", "quadrature order must be >= 1");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  // Newton on P_n with Chebyshev initial guesses, then map [-1, 1] -> [0, 1].
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? z : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (z * pn - pnm1) / (z * z - 1.0);
      const double dz = pn / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n == 1 ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
    r.x[n - 1 - i] = 0.5 * (1.0 + z);
    r.w[n - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

Rule gauss_log(int n) {
  if (n < 1) throw InvalidArgument("bem2d", "quadrature order must be >= 1");
  // Discretize the measure -ln(x) dx with a geometrically graded composite
  // Gauss-Legendre rule (exact to round-off on each panel, where -ln is
  // analytic), then run the Stieltjes procedure on the discrete measure.
  constexpr int kLevels = 40;
  constexpr double kRatio = 0.2;
  const int m = std::max(2 * n + 10, 30);
  const Rule panel = gauss_legendre(m);
  std::vector<double> t, wt;
  double hi = 1.0;
  for (int lvl = 0; lvl <= kLevels; ++lvl) {
    const double lo = lvl == kLevels ? 0.0 : hi * kRatio;
    for (int k = 0; k < m; ++k) {
      const double xk = lo + (hi - lo) * panel.x[k];
      t.push_back(xk);
      wt.push_back(-std::log(xk) * (hi - lo) * panel.w[k]);
    }
    hi = lo;
  }
  const std::size_t N = t.size();

  Eigen::VectorXd alpha(n), bsq(std::max(n - 1, 0));
  std::vector<double> p_prev(N, 0.0), p_cur(N, 1.0), p_next(N);
  double norm_prev = 0.0;
  double norm_cur = 0.0;
  for (std::size_t j = 0; j < N; ++j) norm_cur += wt[j];
  const double mu0 = norm_cur;  // = 1
  for (int k = 0; k < n; ++k) {
    double num = 0.0;
    for (std::size_t j = 0; j < N; ++j) num += wt[j] * t[j] * p_cur[j] * p_cur[j];
    alpha(k) = num / norm_cur;
    const double beta = k == 0 ? 0.0 : norm_cur / norm_prev;
    if (k + 1 == n) break;
    double norm_next = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      p_next[j] = (t[j] - alpha(k)) * p_cur[j] - beta * p_prev[j];
      norm_next += wt[j] * p_next[j] * p_next[j];
    }
    bsq(k) = std::sqrt(norm_next / norm_cur);
    p_prev.swap(p_cur);
    p_cur.swap(p_next);
    norm_prev = norm_cur;
    norm_cur = norm_next;
  }
  return from_jacobi(alpha, bsq, mu0);
}

const Rule& cached_gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

const Rule& cached_gauss_log(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_log(n)).first;
  return it->second;
}

}  // namespace mtf::bem
