#pragma once

#include <optional>
#include <utility>

#include "qet/gramian.hpp"

namespace qet {

/// Terminal event on Y = w^T X_T: the halfspace {Y >= a}, or the
/// interval {a <= Y <= b} when the upper threshold is present.
/// Interval events are accepted for Monte Carlo validation only; the
/// closed-form translation covers halfspaces.
struct EventSpec {
  Vector w;
  double a;
  std::optional<double> b;

  static EventSpec halfspace(Vector w, double a);
  static EventSpec interval(Vector w, double a, double b);
  bool is_interval() const { return b.has_value(); }
};

/// Output of one (event, p0, p1) translation query. When the direction
/// is unreachable (r_squared below tolerance and p1 != p0) the result
/// is marked infeasible and e_min/beta are +infinity sentinels; no
/// exception is thrown from translate itself.
struct TranslationResult {
  double r_squared;  // (w^T W w) / (w^T V w)
  double v;          // w^T V w
  double wWw;        // w^T W w
  double m0;         // uncontrolled terminal mean of w^T X_T
  double p0;
  double p1;
  double z0;
  double z1;
  double e_min;  // dimensionless minimal energy (= KL divergence)
  double beta;   // matched-filter gain
  bool feasible;
};

/// Relative reachability tolerance: feasible iff w^T W w > tol * w^T V w.
inline constexpr double kFeasibilityTol = 1e-12;

/// Minimum-energy control achieving a terminal mean shift along w.
/// Continuous kind evaluates u*(s) = beta * M^+ B^T e^{A^T (T-s)} w;
/// discrete kind stores the step sequence U_k = beta * M^+ B_d^T
/// (A_d^{N-1-k})^T w. Immutable after construction.
class ControlLaw {
 public:
  enum class Kind { continuous_matched, discrete_matched };

  static ControlLaw continuous(double beta, Vector w, const ModelSpec& model,
                               const EffortMetric& metric, double wWw);
  static ControlLaw discrete(double beta, Vector w,
                             const DiscreteModel& dmodel, double wWw);

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  const Vector& direction() const { return w_; }
  double horizon() const { return horizon_; }

  /// beta^2 * w^T W w / 2 (closed form, both kinds).
  double analytic_energy() const { return 0.5 * beta_ * beta_ * wWw_; }
  /// Induced terminal mean shift beta * w^T W w.
  double mean_shift() const { return beta_ * wWw_; }

  /// Continuous kind only: u*(s) for s in [0, T].
  Vector eval(double s) const;

  /// Discrete kind only: N x m step matrix and its effort weight.
  const Matrix& steps() const;
  const Matrix& effort_weight() const;
  /// Discrete kind only: 1/2 sum_k U_k^T M U_k.
  double summed_energy() const;

 private:
  ControlLaw() = default;
  Kind kind_;
  double beta_;
  Vector w_;
  double wWw_;
  double horizon_;
  // continuous evaluation state
  Matrix mpinv_bt_;  // M^+ B^T
  Matrix a_;
  // discrete state
  Matrix steps_;  // N x m
  Matrix m_;      // effort weight
};

/// Uncontrolled terminal mean m0 = w^T e^{A T} x0 and event probability
/// under the baseline law N(m0, w^T V w).
std::pair<double, double> baseline_probability(const ModelSpec& model,
                                               const GramianPair& gram,
                                               const EventSpec& event);

/// Cancellation-safe quantile gap z1 - z0; switches to a density-scaled
/// difference when |p1 - p0| < 1e-8.
double quantile_gap(double p0, double p1);

/// Closed-form minimal energy moving the halfspace probability from p0
/// to p1, with the matched-filter gain that attains it.
TranslationResult translate(const ModelSpec& model, const GramianPair& gram,
                            const EventSpec& event, double p0, double p1);

/// Matched-filter control for a feasible translation result.
ControlLaw synthesize_continuous(const ModelSpec& model,
                                 const GramianPair& gram,
                                 const EventSpec& event,
                                 const TranslationResult& result);

/// Discrete-time translation plus its achieving step sequence; the
/// summed step energy equals the closed form.
std::pair<TranslationResult, ControlLaw> synthesize_discrete(
    const GramianPair& dgram, const DiscreteModel& dmodel,
    const EventSpec& event, double p0, double p1);

enum class ShiftDirection { raise, lower };

/// Inverse map: probability reachable from p0 with energy budget E,
/// p1 = Phi(z0 +/- sqrt(2 E R^2)).
double achievable_p1(const GramianPair& gram, const EventSpec& event,
                     double p0, double energy_budget, ShiftDirection dir);

struct Feasibility {
  bool feasible;
  double r_squared;
};

/// Relative reachability test along w.
Feasibility feasibility_check(const GramianPair& gram, const Vector& w);

}  // namespace qet
