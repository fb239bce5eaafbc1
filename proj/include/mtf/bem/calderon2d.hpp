#pragma once

#include "mtf/bem/assembly.hpp"
#include "mtf/bem/mesh.hpp"
#include "mtf/numkernel.hpp"

namespace mtf::bem {

enum class DomainSide { Interior, Exterior };

/// Galerkin matrix of a Calderon projector paired against P1 test functions,
/// trace ordering (Dirichlet nodes, Neumann nodes). The discrete operator is
/// M_block^{-1} P.
struct DiscreteCalderon {
  RealMatrix P;
  RealMatrix M_block;

  Eigen::Index size() const { return P.rows(); }
  /// M_block^{-1} P
  RealMatrix normalized() const;
};

/// X = diag(Id, -Id) on a trace vector with n Dirichlet and n Neumann entries.
RealMatrix trace_exchange(Eigen::Index n);

/// P = [[M/2 - K, V], [W, M/2 + K']] for operators assembled with normals
/// pointing out of the subdomain.
DiscreteCalderon calderon_from_operators(const BemOperatorSet& ops);

/// Projector of the subdomain on one side of the mesh. Interior expects
/// normals pointing out of the enclosed region, Exterior expects them to point
/// into it; anything else throws.
DiscreteCalderon assemble_calderon_2d(const BoundaryMesh& mesh, const KernelParams& params,
                                      DomainSide side);

/// Projector of the neighbouring subdomain across the same curves and with
/// the same a: X (M_block - P) X.
DiscreteCalderon complement_projector(const DiscreteCalderon& p);

/// Wraps an analytic projector with identity mass.
DiscreteCalderon from_dense(const num::DenseMatrix& p);

/// Blocks of the middle subdomain projector for two nested curves.
///   P0 = [[Pt1, R12], [R21, Pt2]]
/// R12 maps traces on Gamma_2 to traces on Gamma_1 and R21 the reverse.
struct CouplingBlocks {
  RealMatrix R12;
  RealMatrix R21;
  DiscreteCalderon Pt1;
  DiscreteCalderon Pt2;
  DiscreteCalderon P0;
};

/// gamma1 and gamma2 carry normals pointing out of the regions they enclose,
/// gamma1 lying inside gamma2. params holds the constant of the middle region.
CouplingBlocks assemble_coupling(const BoundaryMesh& gamma1, const BoundaryMesh& gamma2,
                                 const KernelParams& params);

/// Columns are smooth trace vectors (cos, sin of m * arclength angle in
/// either component, m = 1..modes) on every curve of the mesh.
RealMatrix smooth_trace_probes(const BoundaryMesh& mesh, int modes = 4);

/// max over probe columns p of |(Q^2 - Q) p|_M / |p|_M with Q = M^{-1} P.
double projector_defect(const DiscreteCalderon& p, const RealMatrix& probes);
/// Same for X Q2 X + Q1 - Id.
double complement_defect(const DiscreteCalderon& p1, const DiscreteCalderon& p2,
                         const RealMatrix& probes);
/// Norm-based variants: |Q^2 - Q|_2 and |X Q2 X + Q1 - Id|_2 (spectral norms).
double projector_defect_norm(const DiscreteCalderon& p);
double complement_defect_norm(const DiscreteCalderon& p1, const DiscreteCalderon& p2);

/// Nodal Dirichlet and Neumann traces of u(x) = G(x - x0) for the normals of
/// the mesh.
Eigen::VectorXd point_source_traces(const BoundaryMesh& mesh, double a, const Point2& x0);

}  // namespace mtf::bem

namespace mtf::bem {

/// Relative Frobenius residuals of the identities tying the middle-region
/// blocks to the outer projectors, all in M^{-1}-normalized form.
struct CouplingResiduals {
  double r21_r12 = 0.0;        // |R21 R12| / (|R21| |R12|)
  double r12_r21 = 0.0;
  double p1_x_r12 = 0.0;       // |P1 X R12 - X R12| / |R12|
  double p2_x_r21 = 0.0;
  double r12_pt2 = 0.0;        // |R12 Pt2 - R12| / |R12|
  double r21_pt1 = 0.0;
  double complement1 = 0.0;    // |X P1 X + Pt1 - Id| / sqrt(dim)
  double complement2 = 0.0;
};

CouplingResiduals coupling_residuals(const CouplingBlocks& blocks, const DiscreteCalderon& p1,
                                     const DiscreteCalderon& p2);

}  // namespace mtf::bem
