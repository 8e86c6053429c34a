#include "qet/kl.hpp"

#include <cmath>

namespace qet {

namespace {

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

}  // namespace

KlReport kl_discrete(const DiscreteModel& dmodel, const Matrix& U) {
  if (U.rows() != dmodel.N || U.cols() != dmodel.B_d.cols()) {
    throw ValidationError("kl_discrete: control sequence must be N x m");
  }
  KlReport report;
  report.per_step_kl.resize(U.rows());
  double total = 0.0;
  for (Index k = 0; k < U.rows(); ++k) {
    const double step = 0.5 * U.row(k) * (dmodel.M.M * U.row(k).transpose());
    report.per_step_kl[k] = step;
    total += step;
  }
  report.kl = total;
  report.energy = total;  // same quadratic form; identical for deterministic U
  report.max_abs_gap = 0.0;
  return report;
}

double control_energy_quadrature(const ControlLaw& law, const ModelSpec& model,
                                 int panels) {
  if (law.kind() != ControlLaw::Kind::continuous_matched) {
    throw ValidationError(
        "control_energy_quadrature: law must be a continuous deterministic "
        "control");
  }
  if (panels < 8) {
    throw ValidationError("control_energy_quadrature: need >= 8 panels");
  }
  const EffortMetric metric = EffortMetric::from_continuous(model);
  const double h = model.T / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double left = p * h;
    for (int g = 0; g < kGlOrder; ++g) {
      const double s = left + 0.5 * h * (1.0 + kGlNodes[g]);
      const double wgt = 0.5 * h * kGlWeights[g];
      const Vector u = law.eval(s);
      total += wgt * u.dot(metric.M * u);
    }
  }
  return 0.5 * total;
}

KlReport kl_continuous_analytic(const ControlLaw& law, const ModelSpec& model,
                                int panels) {
  if (law.kind() != ControlLaw::Kind::continuous_matched) {
    throw ValidationError(
        "kl_continuous_analytic: only deterministic continuous laws are "
        "supported (feedback/stochastic controls are out of scope)");
  }
  KlReport report;
  report.energy = law.analytic_energy();
  report.kl = law.beta() == 0.0 ? 0.0
                                : control_energy_quadrature(law, model, panels);
  report.max_abs_gap = std::abs(report.energy - report.kl);
  return report;
}

}  // namespace qet
