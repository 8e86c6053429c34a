#include "qet/gramian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace qet {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr int kGlOrder = 8;
constexpr double kGlNodes[kGlOrder] = {
    -0.9602898564975362316836, -0.7966664774136267395916,
    -0.5255324099163289858177, -0.1834346424956498049395,
    0.1834346424956498049395,  0.5255324099163289858177,
    0.7966664774136267395916,  0.9602898564975362316836};
constexpr double kGlWeights[kGlOrder] = {
    0.1012285362903762591525, 0.2223810344533744705444,
    0.3137066458778872873380, 0.3626837833783619829652,
    0.3626837833783619829652, 0.3137066458778872873380,
    0.2223810344533744705444, 0.1012285362903762591525};

Matrix solve_spd(const SpdMatrix& s, const Matrix& rhs) {
  Eigen::LLT<Matrix> llt(s.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization failed on a PD matrix");
  }
  return llt.solve(rhs);
}

Index numerical_rank(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = static_cast<double>(std::max(m.rows(), m.cols())) *
                        std::numeric_limits<double>::epsilon() * sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

EffortMetric metric_from_parts(const Matrix& B, const SpdMatrix& Sigma,
                               const std::optional<Matrix>& penalty) {
  Matrix M;
  if (penalty) {
    M = *penalty;
  } else {
    M = B.transpose() * solve_spd(Sigma, B);
  }
  M = detail::symmetrized(M);
  EffortMetric metric;
  metric.M_pinv = pinv(M);
  metric.rank = numerical_rank(M);
  metric.M = std::move(M);
  return metric;
}

Matrix weighted_input_kernel(const Matrix& B, const EffortMetric& metric) {
  return detail::symmetrized(B * metric.M_pinv * B.transpose());
}

}  // namespace

ModelSpec ModelSpec::make(Matrix A, Matrix B, Matrix Sigma, Vector x0,
                          double T, std::optional<Matrix> penalty) {
  detail::require_square(A, "ModelSpec.A");
  detail::require_finite(A, "ModelSpec.A");
  detail::require_finite(B, "ModelSpec.B");
  const Index n = A.rows();
  if (B.rows() != n || B.cols() < 1) {
    throw ValidationError("ModelSpec.B: expected " + std::to_string(n) +
                          " rows");
  }
  if (x0.size() != n || !x0.allFinite()) {
    throw ValidationError("ModelSpec.x0: expected a finite vector of size " +
                          std::to_string(n));
  }
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ValidationError("ModelSpec.T: horizon must be positive and finite");
  }
  SpdMatrix sigma = SpdMatrix::from_symmetric(Sigma);
  if (sigma.rows() != n) {
    throw ValidationError("ModelSpec.Sigma: dimension mismatch");
  }
  if (!sigma.positive_definite()) {
    throw ValidationError("ModelSpec.Sigma: must be positive definite");
  }
  if (penalty) {
    SpdMatrix r = SpdMatrix::from_symmetric(*penalty);
    if (r.rows() != B.cols() || !r.positive_definite()) {
      throw ValidationError("ModelSpec.penalty: must be SPD of input size");
    }
  }
  return ModelSpec{std::move(A), std::move(B),      std::move(sigma),
                   std::move(x0), T,                std::move(penalty)};
}

EffortMetric EffortMetric::from_continuous(const ModelSpec& model) {
  return metric_from_parts(model.B, model.Sigma, model.penalty);
}

EffortMetric EffortMetric::from_discrete(const Matrix& B_d,
                                         const SpdMatrix& Sigma_d,
                                         const std::optional<Matrix>& penalty) {
  return metric_from_parts(B_d, Sigma_d, penalty);
}

Matrix van_loan_gramian(const Matrix& A, const Matrix& Q, double t) {
  const Index n = A.rows();
  // C = [[-A, Q], [0, A^T]]; exp(C t) has e^{A^T t} in the lower-right
  // block and the upper-right block F12 satisfies
  // (e^{A^T t})^T F12 = int_0^t e^{A s} Q e^{A^T s} ds.
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = -A;
  block.topRightCorner(n, n) = Q;
  block.bottomRightCorner(n, n) = A.transpose();
  const Matrix f = expm(block * t);
  const Matrix gram =
      f.bottomRightCorner(n, n).transpose() * f.topRightCorner(n, n);
  return detail::symmetrized(gram);
}

GramianPair continuous_gramians(const ModelSpec& model) {
  if (spectral_norm(model.A) * model.T > 200.0) {
    throw NumericalError(
        "continuous_gramians: ||A||*T > 200 would overflow the block "
        "exponential; segment the horizon and propagate piecewise");
  }
  const EffortMetric metric = EffortMetric::from_continuous(model);
  const Matrix v = van_loan_gramian(model.A, model.Sigma.matrix(), model.T);
  const Matrix w =
      van_loan_gramian(model.A, weighted_input_kernel(model.B, metric),
                       model.T);
  return GramianPair{SpdMatrix::from_symmetric(v), w,
                     GramianMethod::van_loan, model.T, 0, 0.0};
}

GramianPair quadrature_gramians(const ModelSpec& model, int panels) {
  if (panels < 8) {
    throw ValidationError("quadrature_gramians: need at least 8 panels");
  }
  const EffortMetric metric = EffortMetric::from_continuous(model);
  const Matrix qv = model.Sigma.matrix();
  const Matrix qw = weighted_input_kernel(model.B, metric);
  const Index n = model.n();
  Matrix v = Matrix::Zero(n, n);
  Matrix w = Matrix::Zero(n, n);
  const double h = model.T / panels;
  for (int p = 0; p < panels; ++p) {
    const double left = p * h;
    for (int g = 0; g < kGlOrder; ++g) {
      const double tau = left + 0.5 * h * (1.0 + kGlNodes[g]);
      const double wgt = 0.5 * h * kGlWeights[g];
      const Matrix e = expm(model.A * tau);
      v.noalias() += wgt * (e * qv * e.transpose());
      w.noalias() += wgt * (e * qw * e.transpose());
    }
  }
  return GramianPair{SpdMatrix::from_symmetric(detail::symmetrized(v)),
                     detail::symmetrized(w), GramianMethod::quadrature,
                     model.T, 0, 0.0};
}

DiscreteModel zoh_discretize(const ModelSpec& model, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("zoh_discretize: dt must be positive");
  }
  const double ratio = model.T / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 ||
      std::abs(ratio - rounded) >
          4.0 * std::numeric_limits<double>::epsilon() * rounded) {
    throw ValidationError("zoh_discretize: T/dt = " + std::to_string(ratio) +
                          " is not an integer step count");
  }
  const int N = static_cast<int>(rounded);
  const Index n = model.n();
  const Index m = model.m();

  // (A_d, B_d) from exp([[A, B], [0, 0]] dt): robust when A is singular.
  Matrix block = Matrix::Zero(n + m, n + m);
  block.topLeftCorner(n, n) = model.A;
  block.topRightCorner(n, m) = model.B;
  const Matrix e = expm(block * dt);
  Matrix A_d = e.topLeftCorner(n, n);
  Matrix B_d = e.topRightCorner(n, m);

  SpdMatrix Sigma_d = SpdMatrix::from_symmetric(
      van_loan_gramian(model.A, model.Sigma.matrix(), dt));
  EffortMetric metric =
      EffortMetric::from_discrete(B_d, Sigma_d, model.penalty);

  const double a_norm = spectral_norm(model.A);
  const double dt_limit =
      a_norm > 0.0 ? 0.2 / a_norm : std::numeric_limits<double>::infinity();
  return DiscreteModel{std::move(A_d),  std::move(B_d), std::move(Sigma_d),
                       dt,              N,              std::move(metric),
                       model.x0,        dt > dt_limit,  dt_limit};
}

GramianPair discrete_gramians(const DiscreteModel& dmodel) {
  const Index n = dmodel.A_d.rows();
  const Matrix qv = dmodel.Sigma_d.matrix();
  const Matrix qw = weighted_input_kernel(dmodel.B_d, dmodel.M);
  Matrix v = Matrix::Zero(n, n);
  Matrix w = Matrix::Zero(n, n);
  for (int k = 0; k < dmodel.N; ++k) {
    v = dmodel.A_d * v * dmodel.A_d.transpose() + qv;
    w = dmodel.A_d * w * dmodel.A_d.transpose() + qw;
  }
  return GramianPair{SpdMatrix::from_symmetric(detail::symmetrized(v)),
                     detail::symmetrized(w), GramianMethod::discrete_sum,
                     dmodel.N * dmodel.dt, dmodel.N, dmodel.dt};
}

}  // namespace qet
