#include "ruinopt/contracts.hpp"

#include "ruinopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ruinopt {

DimlContract DimlContract::make(const LossModel &loss, double d, double m) {
  if (!(d >= 0.0))
    throw ValidationError("contract: deductible must be >= 0");
  if (!(m >= d))
    throw ValidationError("contract: need d <= m");
  const auto sup = loss.essential_sup();
  if (sup && m > *sup)
    throw ValidationError("contract: limit exceeds the essential supremum");
  return {d, m};
}

DimlContract DimlContract::unlimited(const LossModel &loss, double d) {
  return make(loss, d,
              loss.essential_sup().value_or(std::numeric_limits<double>::infinity()));
}

double diml_retention(const DimlContract &c, double x) {
  if (!(x >= 0.0))
    throw std::domain_error("diml_retention: x must be >= 0");
  if (x <= c.d)
    return x;
  if (x <= c.m)
    return c.d;
  return x - (c.m - c.d);
}

double diml_indemnity(const DimlContract &c, double x) {
  if (!(x >= 0.0))
    throw std::domain_error("diml_indemnity: x must be >= 0");
  if (x <= c.d)
    return 0.0;
  if (x <= c.m)
    return x - c.d;
  return c.m - c.d;
}

double diml_retention_quantile(const LossModel &loss, const DimlContract &c, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("diml_retention_quantile: p must lie in [0, 1]");
  if (p >= loss.mass_above_zero())
    return 0.0;
  if (p < c.p_m(loss))
    return loss.quantile(p) - (c.m - c.d);
  if (p < c.p_d(loss))
    return c.d;
  return loss.quantile(p);
}

double diml_retention_survival(const LossModel &loss, const DimlContract &c, double x) {
  if (!(x >= 0.0))
    throw std::domain_error("diml_retention_survival: x must be >= 0");
  if (x < c.d)
    return loss.survival(x);
  return loss.survival(x + (c.m - c.d));
}

QuantileGrid diml_grid(const LossModel &loss, const DimlContract &c, std::size_t cells) {
  auto base = QuantileGrid::uniform(loss, cells);
  const double p_m = c.p_m(loss), p_d = c.p_d(loss);
  std::vector<double> r(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double p = base.midpoint(i);
    const double x = base.loss()[i];
    r[i] = p < p_m ? x - (c.m - c.d) : (p < p_d ? c.d : x);
  }
  return base.with_retention(std::move(r));
}

double retention_from_quantile(const LossModel &loss, const QuantileGrid &grid, double x) {
  grid.validate();
  if (!(x >= 0.0))
    throw std::domain_error("retention_from_quantile: x must be >= 0");
  return grid.retention_quantile(loss.survival(x));
}

double ruin_probability_given_premium(const LossModel &loss, const DimlContract &c,
                                      double w, double premium) {
  const double net = w - premium;
  const double tol = kCapitalTolerance * (1.0 + std::abs(w));
  if (net < -tol)
    return 1.0;
  if (net >= c.d - tol) {
    const double reach = std::max(net, c.d) + (c.m - c.d);
    return loss.survival(reach);
  }
  return loss.survival(std::max(net, 0.0));
}

double ruin_probability(const Market &market, const DimlContract &c, double w) {
  if (!(w > 0.0))
    throw std::domain_error("ruin_probability: wealth must be > 0");
  const double premium = psi(market, c.d) - psi(market, c.m);
  return ruin_probability_given_premium(market.loss(), c, w, premium);
}

} // namespace ruinopt
