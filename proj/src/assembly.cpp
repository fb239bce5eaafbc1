#include "mtf/bem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mtf/bem/kernel.hpp"
#include "mtf/bem/quadrature.hpp"
#include "mtf/errors.hpp"

namespace mtf::bem {

namespace {

struct ElementGeom {
  Point2 p0;
  Point2 d;       // unit direction n0 -> n1
  Point2 n;       // unit normal
  Point2 center;
  double L = 0.0;
  double dtau[2] = {0.0, 0.0};  // tangential derivatives of the two hat functions
  int node[2] = {0, 0};
};

std::vector<ElementGeom> element_geometry(const BoundaryMesh& mesh) {
  std::vector<ElementGeom> out(mesh.element_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    ElementGeom& g = out[e];
    const Element& el = mesh.elements[e];
    g.p0 = mesh.nodes[el.n0];
    g.d = mesh.direction(e);
    g.n = mesh.normal(e);
    g.L = mesh.length(e);
    g.center = {g.p0[0] + 0.5 * g.L * g.d[0], g.p0[1] + 0.5 * g.L * g.d[1]};
    const double o = mesh.orientation[el.curve];
    g.dtau[0] = -o / g.L;
    g.dtau[1] = o / g.L;
    g.node[0] = el.n0;
    g.node[1] = el.n1;
  }
  return out;
}

/// Local 2x2 blocks of one element pair (x on the test element, y on the trial
/// element). g1 = integral of G over both elements, used by W.
struct PairBlocks {
  double V[2][2] = {};
  double K[2][2] = {};
  double Kp[2][2] = {};
  double g1 = 0.0;
};

inline Point2 at(const ElementGeom& g, double s) {
  return {g.p0[0] + s * g.L * g.d[0], g.p0[1] + s * g.L * g.d[1]};
}

inline double dot(const Point2& u, const Point2& v) { return u[0] * v[0] + u[1] * v[1]; }

void accumulate(PairBlocks& b, double s, double t, double gval, double kval, double kpval,
                double weight) {
  const double px[2] = {1.0 - s, s};
  const double py[2] = {1.0 - t, t};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double w = weight * px[i] * py[j];
      b.V[i][j] += w * gval;
      b.K[i][j] += w * kval;
      b.Kp[i][j] += w * kpval;
    }
  }
  b.g1 += weight * gval;
}

PairBlocks regular_pair(double a, const ElementGeom& ex, const ElementGeom& ey, const Rule& rule) {
  PairBlocks b;
  const double LL = ex.L * ey.L;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Point2 x = at(ex, rule.x[i]);
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const Point2 y = at(ey, rule.x[j]);
      const Point2 z = {x[0] - y[0], x[1] - y[1]};
      const double r = std::hypot(z[0], z[1]);
      const double g = kernel_2d(a, r);
      const double f = kernel_gradient_factor(a, r);
      accumulate(b, rule.x[i], rule.x[j], g, f * dot(z, ey.n), -f * dot(z, ex.n),
                 rule.w[i] * rule.w[j] * LL);
    }
  }
  return b;
}

/// Same element: substitute w = |s - t| so the logarithm sits in one variable.
/// The double-layer kernels vanish on a straight segment.
PairBlocks coincident_pair(double a, const ElementGeom& e, const Rule& gl, const Rule& lg) {
  PairBlocks b;
  const double L = e.L;
  const double lnL = std::log(L);
  auto inner = [&](double w, double weight, bool log_part) {
    const double r = L * w;
    const double c = kernel_log_coefficient(a, r);
    const double kval = log_part ? c : c * lnL + kernel_smooth_part(a, r);
    for (std::size_t k = 0; k < gl.size(); ++k) {
      const double t = (1.0 - w) * gl.x[k];
      const double wk = weight * (1.0 - w) * gl.w[k] * L * L;
      accumulate(b, t + w, t, kval, 0.0, 0.0, wk);
      accumulate(b, t, t + w, kval, 0.0, 0.0, wk);
    }
  };
  for (std::size_t m = 0; m < gl.size(); ++m) inner(gl.x[m], gl.w[m], false);
  // integral of ln(w) h(w) = -sum lg.w h
  for (std::size_t m = 0; m < lg.size(); ++m) inner(lg.x[m], -lg.w[m], true);
  return b;
}

/// Elements sharing one vertex. Local coordinates u (test) and v (trial)
/// measured from the shared vertex; each half of the square is mapped by a
/// Duffy transform so r = z * rho(v) with z the outer variable.
PairBlocks adjacent_pair(double a, const ElementGeom& ex, int vx, const ElementGeom& ey, int vy,
                         const Rule& gl, const Rule& lg) {
  PairBlocks b;
  const Point2 P = vx == 0 ? ex.p0 : at(ex, 1.0);
  const double sx = vx == 0 ? 1.0 : -1.0;
  const double sy = vy == 0 ? 1.0 : -1.0;
  const Point2 ux = {sx * ex.L * ex.d[0], sx * ex.L * ex.d[1]};  // dx/du
  const Point2 uy = {sy * ey.L * ey.d[0], sy * ey.L * ey.d[1]};  // dy/dv
  const double LL = ex.L * ey.L;
  auto local_s = [&](double u) { return vx == 0 ? u : 1.0 - u; };
  auto local_t = [&](double v) { return vy == 0 ? v : 1.0 - v; };

  for (int tri = 0; tri < 2; ++tri) {
    for (std::size_t iv = 0; iv < gl.size(); ++iv) {
      const double v = gl.x[iv];
      // tri 0: t-coordinate = z * v, s-coordinate = z; tri 1: swapped
      const double cu = tri == 0 ? 1.0 : v;
      const double cv = tri == 0 ? v : 1.0;
      const Point2 dz = {cu * ux[0] - cv * uy[0], cu * ux[1] - cv * uy[1]};
      const double rho = std::hypot(dz[0], dz[1]);
      const double ln_rho = std::log(rho);
      auto point = [&](double z, double weight, int part) {
        const double r = z * rho;
        const double u = z * cu;
        const double w = z * cv;
        const double s = local_s(u);
        const double t = local_t(w);
        const double jac = z * weight * gl.w[iv] * LL;
        const double c = kernel_log_coefficient(a, r);
        if (part == 1) {
          accumulate(b, s, t, c, 0.0, 0.0, jac);
          return;
        }
        const double g = c * ln_rho + kernel_smooth_part(a, r);
        const Point2 x = {P[0] + u * ux[0], P[1] + u * ux[1]};
        const Point2 y = {P[0] + w * uy[0], P[1] + w * uy[1]};
        const Point2 d = {x[0] - y[0], x[1] - y[1]};
        const double f = kernel_gradient_factor(a, r);
        accumulate(b, s, t, g, f * dot(d, ey.n), -f * dot(d, ex.n), jac);
      };
      for (std::size_t m = 0; m < gl.size(); ++m) point(gl.x[m], gl.w[m], 0);
      for (std::size_t m = 0; m < lg.size(); ++m) point(lg.x[m], -lg.w[m], 1);
    }
  }
  return b;
}

double distance(const Point2& p, const Point2& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); }

int shared_vertex(const ElementGeom& ex, const ElementGeom& ey, int& vx, int& vy) {
  int count = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (ex.node[i] == ey.node[j]) {
        vx = i;
        vy = j;
        ++count;
      }
    }
  }
  return count;
}

struct Rules {
  const Rule& regular;
  const Rule& near;
  const Rule& singular;
  const Rule& log;
};

PairBlocks pair_blocks(double a, const ElementGeom& ex, const ElementGeom& ey, bool same_mesh,
                       bool same_element, const Rules& rules) {
  if (same_mesh) {
    if (same_element) return coincident_pair(a, ex, rules.singular, rules.log);
    int vx = 0, vy = 0;
    const int shared = shared_vertex(ex, ey, vx, vy);
    if (shared == 1) return adjacent_pair(a, ex, vx, ey, vy, rules.singular, rules.log);
    if (shared > 1) throw NumericalError("bem2d", "element pair shares both vertices");
  }
  const double h = std::max(ex.L, ey.L);
  const bool near = distance(ex.center, ey.center) < 2.5 * h;
  return regular_pair(a, ex, ey, near ? rules.near : rules.regular);
}

/// Loops over all element pairs; rows are computed independently and added
/// to the global matrices in element order.
template <class Scatter>
void for_each_pair(const std::vector<ElementGeom>& gx, const std::vector<ElementGeom>& gy,
                   double a, bool same_mesh, const KernelParams& params, Scatter scatter) {
  const int q = params.quadrature_order;
  const Rules rules{cached_gauss_legendre(q), cached_gauss_legendre(2 * q),
                    cached_gauss_legendre(2 * q), cached_gauss_log(2 * q)};
  const int nx = static_cast<int>(gx.size());
  const int ny = static_cast<int>(gy.size());
  bool failed = false;
  std::string failure;
#pragma omp parallel for ordered schedule(static, 1)
  for (int ex = 0; ex < nx; ++ex) {
    std::vector<PairBlocks> row(ny);
    try {
      for (int ey = 0; ey < ny; ++ey) {
        row[ey] = pair_blocks(a, gx[ex], gy[ey], same_mesh, same_mesh && ex == ey, rules);
      }
    } catch (const std::exception& err) {
#pragma omp critical
      {
        failed = true;
        failure = err.what();
      }
    }
#pragma omp ordered
    {
      if (!failed) {
        for (int ey = 0; ey < ny; ++ey) scatter(gx[ex], gy[ey], row[ey]);
      }
    }
  }
  if (failed) throw NumericalError("bem2d", "assembly failed: " + failure);
}

}  // namespace

void KernelParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("bem2d", "kernel parameter a must be positive");
  if (quadrature_order < 2 || quadrature_order > 64) {
    throw InvalidArgument("bem2d", "quadrature order must lie in [2, 64]");
  }
}

RealMatrix assemble_mass(const BoundaryMesh& mesh) {
  const int n = mesh.node_count();
  RealMatrix M = RealMatrix::Zero(n, n);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double L = mesh.length(e);
    const int i = mesh.elements[e].n0;
    const int j = mesh.elements[e].n1;
    M(i, i) += L / 3.0;
    M(j, j) += L / 3.0;
    M(i, j) += L / 6.0;
    M(j, i) += L / 6.0;
  }
  return M;
}

BemOperatorSet assemble_operators(const BoundaryMesh& mesh, const KernelParams& params) {
  mesh.validate();
  params.validate();
  const auto geom = element_geometry(mesh);
  const int n = mesh.node_count();
  BemOperatorSet ops;
  ops.V = RealMatrix::Zero(n, n);
  ops.K = RealMatrix::Zero(n, n);
  ops.Kp = RealMatrix::Zero(n, n);
  ops.W = RealMatrix::Zero(n, n);
  const double a2 = params.a * params.a;
  for_each_pair(geom, geom, params.a, true, params,
                [&](const ElementGeom& ex, const ElementGeom& ey, const PairBlocks& b) {
                  const double nn = dot(ex.n, ey.n);
                  for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                      const int I = ex.node[i], J = ey.node[j];
                      ops.V(I, J) += b.V[i][j];
                      ops.K(I, J) += b.K[i][j];
                      ops.Kp(I, J) += b.Kp[i][j];
                      ops.W(I, J) += ex.dtau[i] * ey.dtau[j] * b.g1 + a2 * nn * b.V[i][j];
                    }
                  }
                });
  ops.M = assemble_mass(mesh);
  return ops;
}

CrossOperatorSet assemble_cross(const BoundaryMesh& target, const BoundaryMesh& source,
                                const KernelParams& params) {
  target.validate();
  source.validate();
  params.validate();
  if (!(min_distance(target, source) > 0.0)) {
    throw InvalidArgument("bem2d", "coupled curves intersect or touch");
  }
  const auto gx = element_geometry(target);
  const auto gy = element_geometry(source);
  CrossOperatorSet ops;
  ops.V = RealMatrix::Zero(target.node_count(), source.node_count());
  ops.K = ops.V;
  ops.Kp = ops.V;
  ops.W = ops.V;
  const double a2 = params.a * params.a;
  for_each_pair(gx, gy, params.a, false, params,
                [&](const ElementGeom& ex, const ElementGeom& ey, const PairBlocks& b) {
                  const double nn = dot(ex.n, ey.n);
                  for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                      const int I = ex.node[i], J = ey.node[j];
                      ops.V(I, J) += b.V[i][j];
                      ops.K(I, J) += b.K[i][j];
                      ops.Kp(I, J) += b.Kp[i][j];
                      ops.W(I, J) += ex.dtau[i] * ey.dtau[j] * b.g1 + a2 * nn * b.V[i][j];
                    }
                  }
                });
  return ops;
}

}  // namespace mtf::bem
