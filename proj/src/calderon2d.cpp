#include "mtf/bem/calderon2d.hpp"

#include <cmath>
#include <numbers>

#include "mtf/bem/kernel.hpp"
#include "mtf/bem/quadrature.hpp"
#include "mtf/errors.hpp"

namespace mtf::bem {

namespace {

RealMatrix block_diag2(const RealMatrix& M) {
  const auto n = M.rows();
  RealMatrix B = RealMatrix::Zero(2 * n, 2 * n);
  B.topLeftCorner(n, n) = M;
  B.bottomRightCorner(n, n) = M;
  return B;
}

void require_side(const BoundaryMesh& mesh, DomainSide side) {
  for (int c = 0; c < mesh.curve_count(); ++c) {
    const double s = mesh.signed_area(c) * mesh.orientation[c];
    const bool ok = side == DomainSide::Interior ? s > 0.0 : s < 0.0;
    if (!ok) {
      throw InvalidArgument("bem2d", "orientation flag of curve " + std::to_string(c) +
                                         " does not match the requested side");
    }
  }
}

double orient(const Point2& p, const Point2& q, const Point2& r) {
  return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
}

bool segments_cross(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool curves_intersect(const BoundaryMesh& m1, const BoundaryMesh& m2) {
  for (const Element& e : m1.elements) {
    for (const Element& f : m2.elements) {
      if (segments_cross(m1.nodes[e.n0], m1.nodes[e.n1], m2.nodes[f.n0], m2.nodes[f.n1])) {
        return true;
      }
    }
  }
  return false;
}

bool inside(const BoundaryMesh& m, const Point2& p) {
  bool in = false;
  for (const Element& e : m.elements) {
    const Point2& a = m.nodes[e.n0];
    const Point2& b = m.nodes[e.n1];
    if ((a[1] > p[1]) != (b[1] > p[1])) {
      const double x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (x > p[0]) in = !in;
    }
  }
  return in;
}

double m_norm(const RealMatrix& M, const Eigen::VectorXd& v) { return std::sqrt(v.dot(M * v)); }

RealMatrix stack(const RealMatrix& a, const RealMatrix& b, const RealMatrix& c, const RealMatrix& d) {
  RealMatrix out(a.rows() + c.rows(), a.cols() + b.cols());
  out << a, b, c, d;
  return out;
}

}  // namespace

RealMatrix DiscreteCalderon::normalized() const { return M_block.llt().solve(P); }

RealMatrix trace_exchange(Eigen::Index n) {
  RealMatrix X = RealMatrix::Identity(2 * n, 2 * n);
  X.bottomRightCorner(n, n) *= -1.0;
  return X;
}

DiscreteCalderon calderon_from_operators(const BemOperatorSet& ops) {
  const RealMatrix half = 0.5 * ops.M;
  DiscreteCalderon out;
  out.P = stack(half - ops.K, ops.V, ops.W, half + ops.Kp);
  out.M_block = block_diag2(ops.M);
  return out;
}

DiscreteCalderon assemble_calderon_2d(const BoundaryMesh& mesh, const KernelParams& params,
                                      DomainSide side) {
  mesh.validate();
  require_side(mesh, side);
  return calderon_from_operators(assemble_operators(mesh, params));
}

DiscreteCalderon complement_projector(const DiscreteCalderon& p) {
  const RealMatrix X = trace_exchange(p.size() / 2);
  DiscreteCalderon out;
  out.P = X * (p.M_block - p.P) * X;
  out.M_block = p.M_block;
  return out;
}

DiscreteCalderon from_dense(const num::DenseMatrix& p) {
  DiscreteCalderon out;
  out.P = p.real();
  out.M_block = RealMatrix::Identity(p.rows(), p.cols());
  return out;
}

CouplingBlocks assemble_coupling(const BoundaryMesh& gamma1, const BoundaryMesh& gamma2,
                                 const KernelParams& params) {
  gamma1.validate();
  gamma2.validate();
  require_side(gamma1, DomainSide::Interior);
  require_side(gamma2, DomainSide::Interior);
  if (curves_intersect(gamma1, gamma2) || !(min_distance(gamma1, gamma2) > 0.0)) {
    throw InvalidArgument("bem2d", "interface curves intersect");
  }
  if (!inside(gamma2, gamma1.nodes.front())) {
    throw InvalidArgument("bem2d", "inner curve must lie inside the outer curve");
  }
  // normals of the middle region: into Omega_1 on gamma1, out on gamma2
  const BoundaryMesh g1 = gamma1.flipped();
  const BoundaryMesh& g2 = gamma2;

  CouplingBlocks out;
  out.Pt1 = calderon_from_operators(assemble_operators(g1, params));
  out.Pt2 = calderon_from_operators(assemble_operators(g2, params));
  const CrossOperatorSet c12 = assemble_cross(g1, g2, params);
  const CrossOperatorSet c21 = assemble_cross(g2, g1, params);
  out.R12 = stack(-c12.K, c12.V, c12.W, c12.Kp);
  out.R21 = stack(-c21.K, c21.V, c21.W, c21.Kp);

  const auto n1 = out.Pt1.size();
  const auto n2 = out.Pt2.size();
  out.P0.P = RealMatrix::Zero(n1 + n2, n1 + n2);
  out.P0.P.topLeftCorner(n1, n1) = out.Pt1.P;
  out.P0.P.topRightCorner(n1, n2) = out.R12;
  out.P0.P.bottomLeftCorner(n2, n1) = out.R21;
  out.P0.P.bottomRightCorner(n2, n2) = out.Pt2.P;
  out.P0.M_block = RealMatrix::Zero(n1 + n2, n1 + n2);
  out.P0.M_block.topLeftCorner(n1, n1) = out.Pt1.M_block;
  out.P0.M_block.bottomRightCorner(n2, n2) = out.Pt2.M_block;
  return out;
}

RealMatrix smooth_trace_probes(const BoundaryMesh& mesh, int modes) {
  const int n = mesh.node_count();
  // arclength angle of each node along its curve
  std::vector<int> next_elem(n, -1);
  for (int e = 0; e < mesh.element_count(); ++e) next_elem[mesh.elements[e].n0] = e;
  std::vector<double> theta(n, 0.0);
  std::vector<bool> seen(mesh.curve_count(), false);
  for (int e0 = 0; e0 < mesh.element_count(); ++e0) {
    const int c = mesh.elements[e0].curve;
    if (seen[c]) continue;
    seen[c] = true;
    double total = 0.0;
    for (const Element& el : mesh.elements) {
      if (el.curve == c) total += std::hypot(mesh.nodes[el.n1][0] - mesh.nodes[el.n0][0],
                                             mesh.nodes[el.n1][1] - mesh.nodes[el.n0][1]);
    }
    double s = 0.0;
    int e = e0;
    do {
      theta[mesh.elements[e].n0] = 2.0 * std::numbers::pi * s / total;
      s += mesh.length(e);
      e = next_elem[mesh.elements[e].n1];
    } while (e != e0);
  }
  RealMatrix probes = RealMatrix::Zero(2 * n, 4 * modes);
  int col = 0;
  for (int m = 1; m <= modes; ++m) {
    for (int comp = 0; comp < 2; ++comp) {
      for (int i = 0; i < n; ++i) {
        probes(comp * n + i, col) = std::cos(m * theta[i]);
        probes(comp * n + i, col + 1) = std::sin(m * theta[i]);
      }
      col += 2;
    }
  }
  return probes;
}

double projector_defect(const DiscreteCalderon& p, const RealMatrix& probes) {
  const RealMatrix Q = p.normalized();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < probes.cols(); ++k) {
    const Eigen::VectorXd v = probes.col(k);
    const Eigen::VectorXd Qv = Q * v;
    worst = std::max(worst, m_norm(p.M_block, Q * Qv - Qv) / m_norm(p.M_block, v));
  }
  return worst;
}

double complement_defect(const DiscreteCalderon& p1, const DiscreteCalderon& p2,
                         const RealMatrix& probes) {
  const RealMatrix X = trace_exchange(p1.size() / 2);
  const RealMatrix D = X * p2.normalized() * X + p1.normalized() -
                       RealMatrix::Identity(p1.size(), p1.size());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < probes.cols(); ++k) {
    const Eigen::VectorXd v = probes.col(k);
    worst = std::max(worst, m_norm(p1.M_block, D * v) / m_norm(p1.M_block, v));
  }
  return worst;
}

double projector_defect_norm(const DiscreteCalderon& p) {
  const RealMatrix Q = p.normalized();
  const RealMatrix D = Q * Q - Q;
  return Eigen::BDCSVD<RealMatrix>(D).singularValues()(0);
}

double complement_defect_norm(const DiscreteCalderon& p1, const DiscreteCalderon& p2) {
  if (p1.size() != p2.size()) throw InvalidArgument("bem2d", "projector sizes differ");
  const RealMatrix X = trace_exchange(p1.size() / 2);
  const RealMatrix D = X * p2.normalized() * X + p1.normalized() -
                       RealMatrix::Identity(p1.size(), p1.size());
  return Eigen::BDCSVD<RealMatrix>(D).singularValues()(0);
}

Eigen::VectorXd point_source_traces(const BoundaryMesh& mesh, double a, const Point2& x0) {
  const int n = mesh.node_count();
  const Rule& rule = cached_gauss_legendre(8);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * n);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Element& el = mesh.elements[e];
    const Point2& p = mesh.nodes[el.n0];
    const Point2& q = mesh.nodes[el.n1];
    const Point2 nrm = mesh.normal(e);
    const double L = mesh.length(e);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double t = rule.x[k];
      const Point2 x = {p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
      const double dx = x[0] - x0[0], dy = x[1] - x0[1];
      const double r = std::hypot(dx, dy);
      const double u = kernel_2d(a, r);
      // grad_x G(x - x0) = -f(r) (x - x0)
      const double du = -kernel_gradient_factor(a, r) * (dx * nrm[0] + dy * nrm[1]);
      const double w = rule.w[k] * L;
      load(el.n0) += w * (1.0 - t) * u;
      load(el.n1) += w * t * u;
      load(n + el.n0) += w * (1.0 - t) * du;
      load(n + el.n1) += w * t * du;
    }
  }
  const RealMatrix M = assemble_mass(mesh);
  Eigen::LLT<RealMatrix> llt(M);
  Eigen::VectorXd out(2 * n);
  out.head(n) = llt.solve(load.head(n));
  out.tail(n) = llt.solve(load.tail(n));
  return out;
}

}  // namespace mtf::bem

namespace mtf::bem {

CouplingResiduals coupling_residuals(const CouplingBlocks& b, const DiscreteCalderon& p1,
                                     const DiscreteCalderon& p2) {
  const RealMatrix X1 = trace_exchange(p1.size() / 2);
  const RealMatrix X2 = trace_exchange(p2.size() / 2);
  const RealMatrix Q1 = p1.normalized();
  const RealMatrix Q2 = p2.normalized();
  const RealMatrix Qt1 = b.Pt1.normalized();
  const RealMatrix Qt2 = b.Pt2.normalized();
  const RealMatrix R12 = b.Pt1.M_block.llt().solve(b.R12);
  const RealMatrix R21 = b.Pt2.M_block.llt().solve(b.R21);
  const double n12 = R12.norm();
  const double n21 = R21.norm();
  CouplingResiduals out;
  out.r21_r12 = (R21 * R12).norm() / (n21 * n12);
  out.r12_r21 = (R12 * R21).norm() / (n12 * n21);
  out.p1_x_r12 = (Q1 * X1 * R12 - X1 * R12).norm() / n12;
  out.p2_x_r21 = (Q2 * X2 * R21 - X2 * R21).norm() / n21;
  out.r12_pt2 = (R12 * Qt2 - R12).norm() / n12;
  out.r21_pt1 = (R21 * Qt1 - R21).norm() / n21;
  const auto I1 = RealMatrix::Identity(Q1.rows(), Q1.cols());
  const auto I2 = RealMatrix::Identity(Q2.rows(), Q2.cols());
  out.complement1 = (X1 * Q1 * X1 + Qt1 - I1).norm() / std::sqrt(double(Q1.rows()));
  out.complement2 = (X2 * Q2 * X2 + Qt2 - I2).norm() / std::sqrt(double(Q2.rows()));
  return out;
}

}  // namespace mtf::bem
