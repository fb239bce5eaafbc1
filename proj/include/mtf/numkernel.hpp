#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mtf::num {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Largest matrix dimension the dense eigensolvers accept.
inline constexpr Eigen::Index kMaxEigenDimension = 4000;

struct EigenResult {
  std::vector<Complex> eigenvalues;
  /// Right eigenvectors stored column-wise, present only when requested.
  std::optional<DenseMatrix> eigenvectors;
  /// max_k ||A v_k - lambda_k B v_k|| / ||v_k|| (B = Id for the standard
  /// problem); zero when eigenvectors were not requested.
  double residual_norm = 0.0;
};

/// Solves A X = B with a partially pivoted LU factorization. Throws
/// NumericalError when a pivot is zero to working precision.
DenseMatrix solve_dense(const DenseMatrix& A, const DenseMatrix& B);

/// All eigenvalues of a square (possibly nonsymmetric) matrix via Hessenberg
/// reduction and shifted QR.
EigenResult eig_dense(const DenseMatrix& A, bool want_vectors = false);

/// Eigenvalues of the pencil A v = lambda B v via the QZ algorithm, so the
/// mass-type matrix B is never inverted explicitly.
EigenResult eig_generalized(const DenseMatrix& A, const DenseMatrix& B,
                            bool want_vectors = false);

/// Lexicographic order on (real, imag); used to canonicalize spectra.
void sort_eigenvalues(std::vector<Complex>& values);

/// Largest distance in a greedy nearest-neighbour pairing of two multisets of
/// equal size. Returns +inf when sizes differ.
double multiset_distance(std::span<const Complex> a, std::span<const Complex> b);

double spectral_radius(std::span<const Complex> values);

/// max |entry|
double max_abs(const DenseMatrix& A);

bool all_finite(const DenseMatrix& A);

}  // namespace mtf::num
