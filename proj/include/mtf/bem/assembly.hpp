#pragma once

#include <Eigen/Dense>

#include "mtf/bem/mesh.hpp"

namespace mtf::bem {

using RealMatrix = Eigen::MatrixXd;

struct KernelParams {
  double a = 1.0;
  /// Gauss-Legendre order per direction for regular element pairs; near and
  /// singular pairs use twice this order.
  int quadrature_order = 8;

  void validate() const;
};

/// Galerkin matrices with continuous P1 trial and test functions.
///   V[i,j]  = <phi_i, V phi_j>         kernel G(x-y)
///   K[i,j]  = <phi_i, K phi_j>         kernel d/dn(y) G(x-y)
///   Kp[i,j] = <phi_i, K' phi_j>        kernel d/dn(x) G(x-y)
///   W[i,j]  = <phi_i, W phi_j>         regularized hypersingular operator
///   M[i,j]  = <phi_i, phi_j>
/// Normals follow the mesh orientation flags.
struct BemOperatorSet {
  RealMatrix V, K, Kp, W, M;
};

/// Operators mapping densities on `source` to traces tested on `target` for
/// two disjoint meshes; rows index target nodes, columns source nodes.
struct CrossOperatorSet {
  RealMatrix V, K, Kp, W;
};

RealMatrix assemble_mass(const BoundaryMesh& mesh);
BemOperatorSet assemble_operators(const BoundaryMesh& mesh, const KernelParams& params);
CrossOperatorSet assemble_cross(const BoundaryMesh& target, const BoundaryMesh& source,
                                const KernelParams& params);

}  // namespace mtf::bem
