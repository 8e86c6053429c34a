#include "qet/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace qet {

namespace detail {

bool all_finite(const Matrix& x) { return x.allFinite(); }

void require_finite(const Matrix& x, const char* who) {
  if (!x.allFinite()) {
    throw ValidationError(std::string(who) + ": non-finite entries");
  }
}

void require_square(const Matrix& x, const char* who) {
  if (x.rows() != x.cols() || x.rows() < 1) {
    throw ValidationError(std::string(who) + ": expected a square matrix, got " +
                          std::to_string(x.rows()) + "x" +
                          std::to_string(x.cols()));
  }
}

Matrix symmetrized(const Matrix& x) { return 0.5 * (x + x.transpose()); }

double relative_asymmetry(const Matrix& x) {
  const double scale = x.norm();
  if (scale == 0.0) return 0.0;
  return (x - x.transpose()).norm() / scale;
}

}  // namespace detail

SpdMatrix SpdMatrix::from_symmetric(const Matrix& x) {
  detail::require_square(x, "SpdMatrix");
  detail::require_finite(x, "SpdMatrix");
  if (detail::relative_asymmetry(x) > 1e-10) {
    throw ValidationError("SpdMatrix: matrix is not symmetric to tolerance");
  }
  Matrix sym = detail::symmetrized(x);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  const double max_abs = es.eigenvalues().cwiseAbs().maxCoeff();
  if (min_eig < -1e-12 * std::max(max_abs, 1e-300)) {
    throw NumericalError("SpdMatrix: matrix has a negative eigenvalue (" +
                         std::to_string(min_eig) + ")");
  }
  return SpdMatrix(std::move(sym), min_eig);
}

namespace {

// Diagonal Pade approximant numerator/denominator split: exp(A) is
// approximated by (V - U)^{-1} (V + U) with U odd and V even in A.
void pade3(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
  static const double b[] = {120., 60., 12., 1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  u.noalias() = a * (b[3] * a2 + b[1] * id);
  v = b[2] * a2 + b[0] * id;
}

void pade5(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
  static const double b[] = {30240., 15120., 3360., 420., 30., 1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a4 = a2 * a2;
  u.noalias() = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade7(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
  static const double b[] = {17297280., 8648640., 1995840., 277200.,
                             25200.,    1512.,    56.,      1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  u.noalias() = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade9(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
  static const double b[] = {17643225600., 8821612800., 2075673600.,
                             302702400.,   30270240.,   2162160.,
                             110880.,      3960.,       90.,
                             1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix a8 = a6 * a2;
  u.noalias() = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  static const double b[] = {64764752532480000., 32382376266240000.,
                             7771770303897600.,  1187353796428800.,
                             129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,
                             1323241920.,        40840800.,
                             960960.,            16380.,
                             182.,               1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  Matrix tmp = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  tmp += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  u.noalias() = a * tmp;
  v.noalias() = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

Matrix expm(const Matrix& x) {
  detail::require_square(x, "expm");
  detail::require_finite(x, "expm");

  // Order selection thresholds on the 1-norm (Higham's values).
  const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
  Matrix u, v;
  int squarings = 0;
  if (norm1 < 1.495585217958292e-2) {
    pade3(x, x * x, u, v);
  } else if (norm1 < 2.539398330063230e-1) {
    pade5(x, x * x, u, v);
  } else if (norm1 < 9.504178996162932e-1) {
    pade7(x, x * x, u, v);
  } else if (norm1 < 2.097847961257068e0) {
    pade9(x, x * x, u, v);
  } else {
    const double theta13 = 5.371920351148152;
    std::frexp(norm1 / theta13, &squarings);
    if (squarings < 0) squarings = 0;
    const Matrix scaled = x * std::ldexp(1.0, -squarings);
    pade13(scaled, u, v);
  }

  Matrix numer = v + u;
  Matrix denom = v - u;
  Matrix result = denom.partialPivLu().solve(numer);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Matrix pinv(const Matrix& x, std::optional<double> rank_tol) {
  detail::require_finite(x, "pinv");
  if (x.rows() < 1 || x.cols() < 1) {
    throw ValidationError("pinv: empty matrix");
  }
  if (rank_tol && *rank_tol < 0.0) {
    throw ValidationError("pinv: rank tolerance must be >= 0");
  }
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = rank_tol.value_or(
      static_cast<double>(std::max(x.rows(), x.cols())) *
      std::numeric_limits<double>::epsilon());
  const double cutoff = tol * sigma_max;
  Vector inv_sv = Vector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) inv_sv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
}

Matrix psd_sqrt(const Matrix& x, double tol) {
  detail::require_square(x, "psd_sqrt");
  detail::require_finite(x, "psd_sqrt");
  if (detail::relative_asymmetry(x) > 1e-10) {
    throw ValidationError("psd_sqrt: matrix is not symmetric");
  }
  const Matrix sym = detail::symmetrized(x);

  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }

  // Semidefinite (or rounding-negative) spectrum: symmetric square root.
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Vector evals = es.eigenvalues();
  const double scale = evals.cwiseAbs().maxCoeff();
  if (evals.minCoeff() < -tol * std::max(scale, 1e-300)) {
    throw NumericalError("psd_sqrt: matrix is indefinite (min eigenvalue " +
                         std::to_string(evals.minCoeff()) + ")");
  }
  Vector root = evals.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

double spectral_norm(const Matrix& x) {
  detail::require_finite(x, "spectral_norm");
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

double norm_cdf(double x) {
  if (std::isnan(x)) throw ValidationError("norm_cdf: NaN input");
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double norm_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779399461;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// AS 241 (Wichura): rational approximations on three regimes of
// r = sqrt(-log(min(p, 1-p))), accurate to about 1 part in 1e16.
double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("norm_quantile: p must lie strictly in (0, 1)");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) *
                    r +
                45921.953931549871457) *
                   r +
               13731.693765509461125) *
                  r +
              1971.5909503065514427) *
                 r +
             133.14166789178437745) *
                r +
            3.387132872796366608) /
           (((((((r * 5226.495278852854561 + 28729.085735721942674) * r +
                 39307.89580009271061) *
                    r +
                21213.794301586595867) *
                   r +
               5394.1960214247511077) *
                  r +
              687.1870074920579083) *
                 r +
             42.313330701600911252) *
                r +
            1.0);
  }

  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                0.24178072517745061177) *
                   r +
               1.27045825245236838258) *
                  r +
              3.64784832476320460504) *
                 r +
             5.7694972214606914055) *
                r +
            4.6303378461565452959) *
               r +
           1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) *
                   r +
               0.14810397642748007459) *
                  r +
              0.68976733498510000455) *
                 r +
             1.6763848301838038494) *
                r +
            2.05319162663775882187) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) *
                    r +
                0.0012426609473880784386) *
                   r +
               0.026532189526576123093) *
                  r +
              0.29656057182850489123) *
                 r +
             1.7848265399172913358) *
                r +
            5.4637849111641143699) *
               r +
           6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) *
                    r +
                1.8463183175100546818e-5) *
                   r +
               7.868691311456132591e-4) *
                  r +
              0.0148753612908506148525) *
                 r +
             0.13692988092273580531) *
                r +
            0.59983220655588793769) *
               r +
           1.0);
  }
  return q < 0.0 ? -val : val;
}

}  // namespace qet
