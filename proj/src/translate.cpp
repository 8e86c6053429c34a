#include "qet/translate.hpp"

#include <cmath>
#include <limits>

namespace qet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError(std::string(name) +
                          " must lie strictly in (0, 1), got " +
                          std::to_string(p));
  }
}

void require_direction(const Vector& w) {
  if (w.size() < 1 || !w.allFinite() || w.norm() == 0.0) {
    throw ValidationError("event direction w must be finite and nonzero");
  }
}

double quad_form(const Matrix& m, const Vector& w) {
  return w.dot(m * w);
}

// Shared closed-form core for the continuous and discrete paths.
TranslationResult translate_core(double v, double wWw, double m0, double p0,
                                 double p1) {
  require_probability(p0, "p0");
  require_probability(p1, "p1");
  if (!(v > 0.0)) {
    throw NumericalError("translate: degenerate terminal variance w^T V w = " +
                         std::to_string(v));
  }
  TranslationResult r;
  r.v = v;
  r.wWw = wWw;
  r.r_squared = wWw / v;
  r.m0 = m0;
  r.p0 = p0;
  r.p1 = p1;
  r.z0 = norm_quantile(p0);
  r.z1 = norm_quantile(p1);
  if (p1 == p0) {
    r.e_min = 0.0;
    r.beta = 0.0;
    r.feasible = true;
    return r;
  }
  if (r.r_squared <= kFeasibilityTol) {
    r.e_min = kInf;
    r.beta = kInf;
    r.feasible = false;
    return r;
  }
  const double gap = quantile_gap(p0, p1);
  r.e_min = gap * gap / (2.0 * r.r_squared);
  r.beta = gap * std::sqrt(v) / wWw;
  r.feasible = true;
  return r;
}

}  // namespace

EventSpec EventSpec::halfspace(Vector w, double a) {
  require_direction(w);
  if (!std::isfinite(a)) {
    throw ValidationError("event threshold a must be finite");
  }
  return EventSpec{std::move(w), a, {}};
}

EventSpec EventSpec::interval(Vector w, double a, double b) {
  require_direction(w);
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw ValidationError("interval event requires finite thresholds b > a");
  }
  return EventSpec{std::move(w), a, b};
}

ControlLaw ControlLaw::continuous(double beta, Vector w,
                                  const ModelSpec& model,
                                  const EffortMetric& metric, double wWw) {
  ControlLaw law;
  law.kind_ = Kind::continuous_matched;
  law.beta_ = beta;
  law.w_ = std::move(w);
  law.wWw_ = wWw;
  law.horizon_ = model.T;
  law.mpinv_bt_ = metric.M_pinv * model.B.transpose();
  law.a_ = model.A;
  return law;
}

ControlLaw ControlLaw::discrete(double beta, Vector w,
                                const DiscreteModel& dmodel, double wWw) {
  ControlLaw law;
  law.kind_ = Kind::discrete_matched;
  law.beta_ = beta;
  law.w_ = std::move(w);
  law.wWw_ = wWw;
  law.horizon_ = dmodel.N * dmodel.dt;
  law.m_ = dmodel.M.M;
  const Matrix mpinv_bt = dmodel.M.M_pinv * dmodel.B_d.transpose();
  law.steps_.resize(dmodel.N, dmodel.B_d.cols());
  Vector g = law.w_;  // g_k = (A_d^{N-1-k})^T w, built backwards
  for (int k = dmodel.N - 1; k >= 0; --k) {
    law.steps_.row(k) = (beta * (mpinv_bt * g)).transpose();
    g = dmodel.A_d.transpose() * g;
  }
  return law;
}

Vector ControlLaw::eval(double s) const {
  if (kind_ != Kind::continuous_matched) {
    throw ValidationError("ControlLaw::eval: law is not continuous");
  }
  if (s < 0.0 || s > horizon_) {
    throw ValidationError("ControlLaw::eval: s outside [0, T]");
  }
  return beta_ * (mpinv_bt_ * (expm(a_.transpose() * (horizon_ - s)) * w_));
}

const Matrix& ControlLaw::steps() const {
  if (kind_ != Kind::discrete_matched) {
    throw ValidationError("ControlLaw::steps: law is not discrete");
  }
  return steps_;
}

const Matrix& ControlLaw::effort_weight() const {
  if (kind_ != Kind::discrete_matched) {
    throw ValidationError("ControlLaw::effort_weight: law is not discrete");
  }
  return m_;
}

double ControlLaw::summed_energy() const {
  const Matrix& u = steps();
  double total = 0.0;
  for (Index k = 0; k < u.rows(); ++k) {
    total += u.row(k) * (m_ * u.row(k).transpose());
  }
  return 0.5 * total;
}

std::pair<double, double> baseline_probability(const ModelSpec& model,
                                               const GramianPair& gram,
                                               const EventSpec& event) {
  const double v = quad_form(gram.V.matrix(), event.w);
  if (!(v > 0.0)) {
    throw NumericalError("baseline_probability: degenerate variance");
  }
  const double m0 = event.w.dot(expm(model.A * model.T) * model.x0);
  const double sd = std::sqrt(v);
  double p0;
  if (event.is_interval()) {
    p0 = norm_cdf((*event.b - m0) / sd) - norm_cdf((event.a - m0) / sd);
  } else {
    p0 = 1.0 - norm_cdf((event.a - m0) / sd);
  }
  return {m0, p0};
}

double quantile_gap(double p0, double p1) {
  require_probability(p0, "p0");
  require_probability(p1, "p1");
  if (p1 == p0) return 0.0;
  if (std::abs(p1 - p0) < 1e-8) {
    // Direct subtraction of quantiles loses ~half the digits here; the
    // density-scaled difference at the midpoint quantile does not.
    const double zbar = norm_quantile(0.5 * (p0 + p1));
    return (p1 - p0) / norm_pdf(zbar);
  }
  return norm_quantile(p1) - norm_quantile(p0);
}

TranslationResult translate(const ModelSpec& model, const GramianPair& gram,
                            const EventSpec& event, double p0, double p1) {
  if (event.is_interval()) {
    throw ValidationError(
        "translate: interval events are validation-only; the closed form "
        "covers halfspace events");
  }
  require_direction(event.w);
  const double v = quad_form(gram.V.matrix(), event.w);
  const double wWw = quad_form(gram.W, event.w);
  const double m0 = event.w.dot(expm(model.A * model.T) * model.x0);
  return translate_core(v, wWw, m0, p0, p1);
}

ControlLaw synthesize_continuous(const ModelSpec& model,
                                 const GramianPair& gram,
                                 const EventSpec& event,
                                 const TranslationResult& result) {
  if (!result.feasible) {
    throw FeasibilityError(
        "synthesize_continuous: translation is infeasible (R^2 = " +
        std::to_string(result.r_squared) + ")");
  }
  const EffortMetric metric = EffortMetric::from_continuous(model);
  (void)gram;
  return ControlLaw::continuous(result.beta, event.w, model, metric,
                                result.wWw);
}

std::pair<TranslationResult, ControlLaw> synthesize_discrete(
    const GramianPair& dgram, const DiscreteModel& dmodel,
    const EventSpec& event, double p0, double p1) {
  if (event.is_interval()) {
    throw ValidationError("synthesize_discrete: interval events unsupported");
  }
  require_direction(event.w);
  const double v = quad_form(dgram.V.matrix(), event.w);
  const double wWw = quad_form(dgram.W, event.w);
  Vector g = dmodel.x0;
  for (int k = 0; k < dmodel.N; ++k) g = dmodel.A_d * g;
  const double m0 = event.w.dot(g);
  TranslationResult result = translate_core(v, wWw, m0, p0, p1);
  if (!result.feasible) {
    throw FeasibilityError(
        "synthesize_discrete: translation is infeasible (R^2 = " +
        std::to_string(result.r_squared) + ")");
  }
  ControlLaw law = ControlLaw::discrete(result.beta, event.w, dmodel,
                                        result.wWw);
  return {std::move(result), std::move(law)};
}

double achievable_p1(const GramianPair& gram, const EventSpec& event,
                     double p0, double energy_budget, ShiftDirection dir) {
  require_probability(p0, "p0");
  if (!(energy_budget >= 0.0) || !std::isfinite(energy_budget)) {
    throw ValidationError("achievable_p1: energy budget must be finite, >= 0");
  }
  if (energy_budget == 0.0) return p0;
  const Feasibility f = feasibility_check(gram, event.w);
  if (!f.feasible) {
    throw FeasibilityError(
        "achievable_p1: direction unreachable, no probability shift at "
        "finite energy");
  }
  const double z0 = norm_quantile(p0);
  const double step = std::sqrt(2.0 * energy_budget * f.r_squared);
  const double z1 = dir == ShiftDirection::raise ? z0 + step : z0 - step;
  return norm_cdf(z1);
}

Feasibility feasibility_check(const GramianPair& gram, const Vector& w) {
  require_direction(w);
  const double v = quad_form(gram.V.matrix(), w);
  const double wWw = quad_form(gram.W, w);
  if (!(v > 0.0)) return {false, 0.0};
  return {wWw > kFeasibilityTol * v, wWw / v};
}

}  // namespace qet
