#pragma once

#include <optional>

#include "qet/linalg.hpp"

namespace qet {

/// Continuous-time linear-Gaussian model
///   dX = A X dt + B u dt + Sigma^{1/2} dW,  X_0 = x0,
/// over the horizon [0, T]. The quadratic effort weight defaults to
/// M = B^T Sigma^{-1} B; a custom SPD penalty matrix may replace it.
struct ModelSpec {
  Matrix A;                       // n x n drift (1/s)
  Matrix B;                       // n x m input map (unitless)
  SpdMatrix Sigma;                // n x n diffusion ([x]^2/s), PD
  Vector x0;                      // n initial mean ([x])
  double T;                       // horizon (s), > 0
  std::optional<Matrix> penalty;  // m x m SPD effort weight override

  static ModelSpec make(Matrix A, Matrix B, Matrix Sigma, Vector x0, double T,
                        std::optional<Matrix> penalty = {});

  Index n() const { return A.rows(); }
  Index m() const { return B.cols(); }
};

/// Effort weight M together with its pseudoinverse and numerical rank.
struct EffortMetric {
  Matrix M;       // m x m PSD
  Matrix M_pinv;  // m x m
  Index rank;

  /// M = B^T Sigma^{-1} B (or the penalty override).
  static EffortMetric from_continuous(const ModelSpec& model);
  static EffortMetric from_discrete(const Matrix& B_d, const SpdMatrix& Sigma_d,
                                    const std::optional<Matrix>& penalty);
};

enum class GramianMethod { van_loan, quadrature, discrete_sum };

/// Terminal noise covariance V and effort-weighted controllability
/// Gramian W for one horizon. N == 0 marks a continuous-time pair.
struct GramianPair {
  SpdMatrix V;
  Matrix W;  // PSD, symmetric
  GramianMethod method;
  double T;
  int N;      // 0 for continuous
  double dt;  // 0 for continuous
};

/// Exact zero-order-hold companion of a ModelSpec.
struct DiscreteModel {
  Matrix A_d;
  Matrix B_d;
  SpdMatrix Sigma_d;  // per-step noise covariance
  double dt;
  int N;
  EffortMetric M;  // B_d^T Sigma_d^{-1} B_d (or penalty override)
  Vector x0;
  bool dt_warning;    // set when dt exceeds 0.2 / ||A||_2
  double dt_limit;    // 0.2 / ||A||_2 (infinity when ||A|| = 0)
};

/// One integral of the form int_0^t e^{A s} Q e^{A^T s} ds evaluated
/// through a single block matrix exponential.
Matrix van_loan_gramian(const Matrix& A, const Matrix& Q, double t);

/// V = int_0^T e^{A s} Sigma e^{A^T s} ds and
/// W = int_0^T e^{A s} B M^+ B^T e^{A^T s} ds, one block exponential
/// each. Throws NumericalError when ||A||_2 * T > 200 (split the
/// horizon and propagate piecewise instead).
GramianPair continuous_gramians(const ModelSpec& model);

/// Same integrals by composite Gauss-Legendre quadrature (independent
/// cross-check of the block-exponential path). `panels` composite
/// panels of a fixed 8-point rule; panels >= 8.
GramianPair quadrature_gramians(const ModelSpec& model, int panels = 257);

/// Exact ZOH discretization: (A_d, B_d) from the block exponential of
/// [[A, B], [0, 0]] * dt (never through A^{-1}), Sigma_d from the
/// Van Loan Gramian over one step. T/dt must be an integer.
DiscreteModel zoh_discretize(const ModelSpec& model, double dt);

/// V_N and W_N by the recursion G <- A_d G A_d^T + Q (N iterations,
/// no explicit matrix powers, no dt factors).
GramianPair discrete_gramians(const DiscreteModel& dmodel);

}  // namespace qet
