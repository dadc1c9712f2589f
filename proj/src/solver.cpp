#include "ruinopt/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace ruinopt {

namespace {
constexpr double kThetaTolerance = 1e-12;
constexpr double kWealthTolerance = 1e-12;
} // namespace

std::string_view case_name(SolutionCase c) {
  switch (c) {
  case SolutionCase::ZeroDeductible:
    return "zero_deductible";
  case SolutionCase::NoInsurance:
    return "no_insurance";
  case SolutionCase::PositiveDeductible:
    return "positive_deductible";
  case SolutionCase::SafeLevel:
    return "safe_level";
  }
  return "unknown";
}

double theta_s(const Market &market) {
  return 1.0 / market.distortion()(market.loss().mass_above_zero()) - 1.0;
}

double d_s(const Market &market) {
  if (market.theta() <= theta_s(market) + kThetaTolerance)
    return 0.0;
  const double p = market.distortion().inverse(1.0 / market.loading());
  return market.loss().quantile(p);
}

double w_s(const Market &market) { return phi(market, d_s(market)); }

Thresholds thresholds(const Market &market) {
  Thresholds t;
  t.theta_s = theta_s(market);
  t.d_s = d_s(market);
  t.w_s = phi(market, t.d_s);
  return t;
}

Solution solve(const Market &market, double w) {
  if (!(w > 0.0) || !std::isfinite(w))
    throw std::domain_error("solve: wealth must be finite and > 0");

  const auto &loss = market.loss();
  Solution s;
  s.thresholds = thresholds(market);
  const auto &t = s.thresholds;

  if (w >= t.w_s * (1.0 - kWealthTolerance)) {
    s.kind = SolutionCase::SafeLevel;
    s.contract = DimlContract::unlimited(loss, t.d_s);
    s.premium = psi(market, t.d_s);
    s.ruin_prob = 0.0;
    return s;
  }

  double d;
  if (market.theta() <= t.theta_s + kThetaTolerance) {
    s.kind = SolutionCase::ZeroDeductible;
    d = 0.0;
  } else if (w <= t.d_s * (1.0 + kWealthTolerance)) {
    s.kind = SolutionCase::NoInsurance;
    s.contract = DimlContract::none(w);
    s.premium = 0.0;
    s.ruin_prob = loss.survival(w);
    return s;
  } else {
    s.kind = SolutionCase::PositiveDeductible;
    d = t.d_s;
  }

  // The limit spends exactly what is left after the deductible:
  // Psi(d) - Psi(m) = w - d.
  const double psi_d = psi(market, d);
  const double target = std::max(0.0, d + psi_d - w);
  const double m = psi_inverse(market, target);
  s.contract = DimlContract::make(loss, d, m);
  s.premium = psi_d - psi(market, m);
  s.ruin_prob = loss.survival(m);
  return s;
}

} // namespace ruinopt
