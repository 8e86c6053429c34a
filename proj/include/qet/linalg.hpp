#pragma once

#include <Eigen/Dense>
#include <optional>

#include "qet/errors.hpp"

namespace qet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Symmetric positive semidefinite matrix, validated at construction.
/// Input is checked for symmetry (relative Frobenius tolerance 1e-10)
/// and for spectrum bounded below by -1e-12 * ||X||_2, then stored in
/// exactly symmetrized form.
class SpdMatrix {
 public:
  static SpdMatrix from_symmetric(const Matrix& x);

  const Matrix& matrix() const { return m_; }
  Index rows() const { return m_.rows(); }
  double min_eigenvalue() const { return min_eig_; }
  bool positive_definite() const { return min_eig_ > 0.0; }

 private:
  SpdMatrix(Matrix m, double min_eig)
      : m_(std::move(m)), min_eig_(min_eig) {}
  Matrix m_;
  double min_eig_;
};

/// Matrix exponential by scaling-and-squaring with diagonal Pade
/// approximants (orders 3/5/7/9/13 picked from the 1-norm).
Matrix expm(const Matrix& x);

/// Moore-Penrose pseudoinverse via SVD. Singular values below
/// rank_tol * sigma_max are treated as zero; the default tolerance is
/// max(rows, cols) * machine epsilon.
Matrix pinv(const Matrix& x, std::optional<double> rank_tol = {});

/// Factor L with L * L^T = X for symmetric PSD X: Cholesky when the
/// matrix is definite, symmetric eigenvalue square root otherwise.
/// Throws NumericalError if an eigenvalue falls below -tol * ||X||_2.
Matrix psd_sqrt(const Matrix& x, double tol = 1e-10);

/// Largest singular value.
double spectral_norm(const Matrix& x);

/// Standard normal CDF, density, and quantile. The quantile is the
/// AS 241 rational approximation (good to ~1 part in 1e16); p must lie
/// strictly inside (0, 1).
double norm_cdf(double x);
double norm_pdf(double x);
double norm_quantile(double p);

namespace detail {
bool all_finite(const Matrix& x);
void require_finite(const Matrix& x, const char* who);
void require_square(const Matrix& x, const char* who);
Matrix symmetrized(const Matrix& x);
double relative_asymmetry(const Matrix& x);
}  // namespace detail

}  // namespace qet
