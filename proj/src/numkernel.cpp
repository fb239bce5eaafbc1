#include "mtf/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "mtf/errors.hpp"

namespace mtf::num {

namespace {

void require_square(const DenseMatrix& A, const char* what) {
  if (A.rows() != A.cols()) {
    std::ostringstream os;
    os << what << ": matrix must be square, got " << A.rows() << "x" << A.cols();
    throw InvalidArgument("numkernel", os.str());
  }
}

void require_finite(const DenseMatrix& A, const char* what) {
  if (!all_finite(A)) {
    throw InvalidArgument("numkernel", std::string(what) + ": non-finite entry");
  }
}

void require_eig_size(const DenseMatrix& A) {
  if (A.rows() > kMaxEigenDimension) {
    std::ostringstream os;
    os << "eigenproblem dimension " << A.rows() << " exceeds cap " << kMaxEigenDimension;
    throw InvalidArgument("numkernel", os.str());
  }
}

double residual(const DenseMatrix& A, const DenseMatrix* B, const std::vector<Complex>& lambda,
                const DenseMatrix& V) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < V.cols(); ++k) {
    const auto v = V.col(k);
    const double nv = v.norm();
    if (nv == 0.0) continue;
    Vector r = A * v;
    if (B != nullptr) {
      r -= lambda[k] * ((*B) * v);
    } else {
      r -= lambda[k] * v;
    }
    worst = std::max(worst, r.norm() / nv);
  }
  return worst;
}

}  // namespace

bool all_finite(const DenseMatrix& A) {
  return A.allFinite();
}

double max_abs(const DenseMatrix& A) {
  return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

DenseMatrix solve_dense(const DenseMatrix& A, const DenseMatrix& B) {
  require_square(A, "solve_dense");
  require_finite(A, "solve_dense");
  if (B.rows() != A.rows()) {
    std::ostringstream os;
    os << "solve_dense: right-hand side has " << B.rows() << " rows, expected " << A.rows();
    throw InvalidArgument("numkernel", os.str());
  }
  if (A.rows() == 0) return DenseMatrix(0, B.cols());

  Eigen::PartialPivLU<DenseMatrix> lu(A);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  const double smallest = diag.minCoeff();
  const double largest = diag.maxCoeff();
  const double threshold =
      static_cast<double>(A.rows()) * std::numeric_limits<double>::epsilon() * largest;
  if (!(smallest > threshold)) {
    std::ostringstream os;
    os << "solve_dense: matrix is singular to working precision (smallest pivot "
       << smallest << ", largest " << largest << ")";
    throw NumericalError("numkernel", os.str());
  }
  return lu.solve(B);
}

EigenResult eig_dense(const DenseMatrix& A, bool want_vectors) {
  require_square(A, "eig_dense");
  require_finite(A, "eig_dense");
  require_eig_size(A);

  const lapack_int n = static_cast<lapack_int>(A.rows());
  EigenResult out;
  if (n == 0) return out;

  DenseMatrix work = A;
  std::vector<Complex> w(n);
  DenseMatrix vr;
  if (want_vectors) vr.resize(n, n);
  Complex dummy{};
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, work.data(), n, w.data(), &dummy, 1,
      want_vectors ? vr.data() : &dummy, want_vectors ? n : 1);
  if (info > 0) {
    std::ostringstream os;
    os << "eig_dense: QR iteration did not converge; " << (n - info) << " of " << n
       << " eigenvalues deflated";
    throw NumericalError("numkernel", os.str());
  }
  if (info < 0) {
    throw NumericalError("numkernel", "eig_dense: invalid argument " + std::to_string(-info));
  }
  out.eigenvalues = std::move(w);
  if (want_vectors) {
    out.residual_norm = residual(A, nullptr, out.eigenvalues, vr);
    out.eigenvectors = std::move(vr);
  }
  return out;
}

EigenResult eig_generalized(const DenseMatrix& A, const DenseMatrix& B, bool want_vectors) {
  require_square(A, "eig_generalized");
  require_square(B, "eig_generalized");
  require_finite(A, "eig_generalized");
  require_finite(B, "eig_generalized");
  require_eig_size(A);
  if (A.rows() != B.rows()) {
    throw InvalidArgument("numkernel", "eig_generalized: A and B differ in dimension");
  }

  const lapack_int n = static_cast<lapack_int>(A.rows());
  EigenResult out;
  if (n == 0) return out;

  DenseMatrix a = A;
  DenseMatrix b = B;
  std::vector<Complex> alpha(n), beta(n);
  DenseMatrix vr;
  if (want_vectors) vr.resize(n, n);
  Complex dummy{};
  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n, b.data(), n,
      alpha.data(), beta.data(), &dummy, 1, want_vectors ? vr.data() : &dummy,
      want_vectors ? n : 1);
  if (info > 0 && info <= n) {
    std::ostringstream os;
    os << "eig_generalized: QZ iteration did not converge; " << (n - info) << " of " << n
       << " eigenvalues deflated";
    throw NumericalError("numkernel", os.str());
  }
  if (info != 0) {
    throw NumericalError("numkernel", "eig_generalized: LAPACK error " + std::to_string(info));
  }

  // An infinite eigenvalue means B is singular in the direction of some
  // eigenvector, which violates the precondition.
  const double scale_b = max_abs(B);
  out.eigenvalues.resize(n);
  for (lapack_int k = 0; k < n; ++k) {
    if (std::abs(beta[k]) <= 64.0 * std::numeric_limits<double>::epsilon() * scale_b) {
      std::ostringstream os;
      os << "eig_generalized: B is singular to working precision (|beta| = "
         << std::abs(beta[k]) << ")";
      throw NumericalError("numkernel", os.str());
    }
    out.eigenvalues[k] = alpha[k] / beta[k];
  }
  if (want_vectors) {
    out.residual_norm = residual(A, &B, out.eigenvalues, vr);
    out.eigenvectors = std::move(vr);
  }
  return out;
}

void sort_eigenvalues(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
}

double multiset_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

double spectral_radius(std::span<const Complex> values) {
  double r = 0.0;
  for (const Complex& v : values) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace mtf::num
