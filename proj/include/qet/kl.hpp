#pragma once

#include <vector>

#include "qet/translate.hpp"

namespace qet {

/// Path-measure KL divergence of a controlled law against the
/// uncontrolled one, side by side with the quadratic control energy.
/// For deterministic controls the two are the same number; the report
/// keeps both routes so the identity is visible numerically.
struct KlReport {
  double energy;
  double kl;
  std::vector<double> per_step_kl;  // discrete case only
  double max_abs_gap;               // |energy - kl|
};

/// Discrete case: per-step KL of N(A_d x + B_d U_k, Sigma_d) against
/// N(A_d x, Sigma_d) is 1/2 U_k^T M U_k; totals are accumulated through
/// the effort weight M so singular weights share the pseudoinverse path.
KlReport kl_discrete(const DiscreteModel& dmodel, const Matrix& U);

/// Continuous case for a deterministic matched-filter law: energy from
/// the closed form beta^2 w^T W w / 2, kl from Gauss-Legendre quadrature
/// of 1/2 u^T M u over [0, T]. Feedback/stochastic laws are unsupported.
KlReport kl_continuous_analytic(const ControlLaw& law, const ModelSpec& model,
                                int panels = 257);

/// 1/2 int_0^T u(s)^T M u(s) ds by composite quadrature; shared with
/// the report above and usable as an independent energy cross-check.
double control_energy_quadrature(const ControlLaw& law, const ModelSpec& model,
                                 int panels = 257);

}  // namespace qet
