#include "ruinopt/premium.hpp"

#include "ruinopt/errors.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace ruinopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBodyTolerance = 1e-12;
constexpr double kPieceTolerance = 1e-14;
constexpr int kMaxTailPieces = 2000;

// Exponent c with g(p) = p^c, when the distortion is a power.
std::optional<double> power_exponent(const Distortion &g) {
  if (std::holds_alternative<IdentityDistortion>(g.family()))
    return 1.0;
  if (auto *ph = std::get_if<ProportionalHazard>(&g.family()))
    return ph->c;
  return std::nullopt;
}

// integral_x^M S(t)^c dt in closed form, when known.
std::optional<double> closed_power_tail(const LossModel &loss, double c, double x) {
  return std::visit(
      [&](const auto &f) -> std::optional<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return std::exp(-c * f.rate * x) / (c * f.rate);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          if (x >= f.upper)
            return 0.0;
          return f.upper / (c + 1.0) * std::pow(1.0 - x / f.upper, c + 1.0);
        } else if constexpr (std::is_same_v<T, Pareto>) {
          const double decay = c * f.shape;
          if (decay <= 1.0)
            throw PremiumNotFinite("distorted Pareto tail diverges (c*shape <= 1)");
          if (std::isinf(x))
            return 0.0;
          return f.scale / (decay - 1.0) * std::exp((1.0 - decay) * std::log1p(x / f.scale));
        } else if constexpr (std::is_same_v<T, AtomScaled>) {
          auto inner = closed_power_tail(*f.inner, c, x);
          if (!inner)
            return std::nullopt;
          return std::pow(f.q, c) * *inner;
        } else {
          return std::nullopt;
        }
      },
      loss.family());
}

} // namespace

Market::Market(LossModel loss, Distortion distortion, double theta, Quadrature mode)
    : loss_(std::move(loss)), distortion_(distortion), theta_(theta), mode_(mode) {
  if (!(std::isfinite(theta) && theta >= 0.0))
    throw ValidationError("market: theta must be finite and >= 0");
  kinks_ = loss_.kinks();
  cutoff_ = loss_.upper_or_quantile(kTailProbability);

  const bool closed = mode_ == Quadrature::Auto && power_exponent(distortion_) &&
                      closed_power_tail(loss_, *power_exponent(distortion_), 0.0);
  if (!closed && !loss_.bounded())
    cutoff_tail_ = geometric_tail(cutoff_, kInf);

  const auto total = distorted_integral(0.0, kInf);
  full_premium_ = loading() * total.value;
  full_premium_error_ = loading() * total.error;
  if (!std::isfinite(full_premium_))
    throw PremiumNotFinite("market: full-coverage premium is not finite");
}

numerics::Integral Market::distorted_integral(double a, double b) const {
  if (!(a >= 0.0) || !(b >= a))
    throw std::domain_error("distorted_integral: need 0 <= a <= b");
  if (auto m = loss_.essential_sup()) {
    b = std::min(b, *m);
    if (a >= b)
      return {};
  }
  if (a == b)
    return {};

  if (mode_ == Quadrature::Auto) {
    if (auto c = power_exponent(distortion_)) {
      if (auto fa = closed_power_tail(loss_, *c, a)) {
        const double fb = std::isinf(b) ? 0.0 : *closed_power_tail(loss_, *c, b);
        const double value = *fa - fb;
        return {value, 8 * std::numeric_limits<double>::epsilon() * *fa};
      }
    }
  }
  return numeric_integral(a, b);
}

numerics::Integral Market::numeric_integral(double a, double b) const {
  auto integrand = [this](double t) { return distortion_(loss_.survival(t)); };
  if (b <= cutoff_)
    return numerics::integrate(integrand, a, b, kBodyTolerance, kinks_);

  numerics::Integral out;
  if (a < cutoff_)
    out = numerics::integrate(integrand, a, cutoff_, kBodyTolerance, kinks_);
  const auto tail = (std::isinf(b) && a <= cutoff_) ? cutoff_tail_
                                                   : geometric_tail(std::max(a, cutoff_), b);
  out.value += tail.value;
  out.error += tail.error;
  return out;
}

// Sum over [a, 2a+1], [2a+1, 4a+3], ... until b, or for b = inf until the
// ratio test bounds the remainder.
numerics::Integral Market::geometric_tail(double a, double b) const {
  auto integrand = [this](double t) { return distortion_(loss_.survival(t)); };
  numerics::Integral out;
  double lo = a, prev = -1.0;
  int growing = 0;
  for (int k = 0; k < kMaxTailPieces; ++k) {
    const double hi = std::min(b, 2.0 * lo + 1.0);
    if (std::isinf(hi))
      break;
    const auto piece = numerics::integrate(integrand, lo, hi, kPieceTolerance);
    out.value += piece.value;
    out.error += piece.error;
    if (hi == b || piece.value == 0.0)
      return out;
    if (prev > 0.0) {
      const double ratio = piece.value / prev;
      if (ratio < 1.0) {
        growing = 0;
        const double remainder = piece.value * ratio / (1.0 - ratio);
        if (k >= 3 && remainder <= kPieceTolerance * std::max(1.0, out.value)) {
          out.error += remainder;
          return out;
        }
      } else if (++growing > 50) {
        break;
      }
    }
    prev = piece.value;
    lo = hi;
  }
  throw PremiumNotFinite("distorted tail integral does not converge for " +
                         loss_.describe() + " under " + distortion_.describe());
}

double psi(const Market &market, double x) {
  if (!(x >= 0.0))
    throw std::domain_error("psi: x must be >= 0");
  if (auto m = market.loss().essential_sup()) {
    if (x > *m * (1.0 + 1e-12))
      throw std::domain_error("psi: x exceeds the essential supremum");
    x = std::min(x, *m);
  }
  if (std::isinf(x))
    return 0.0;
  if (x == 0.0)
    return market.full_premium();
  return market.loading() * market.distorted_integral(x, kInf).value;
}

double phi(const Market &market, double x) { return x + psi(market, x); }

double psi_inverse(const Market &market, double y) {
  const double top = market.full_premium();
  if (!(y >= 0.0) || y > top * (1.0 + 1e-12))
    throw std::domain_error("psi_inverse: y outside [0, Psi(0)]");
  if (y >= top)
    return 0.0;
  const auto sup = market.loss().essential_sup();
  if (y == 0.0) {
    if (sup)
      return *sup;
    throw UnboundedError("psi_inverse(0) is unbounded for " + market.loss().describe());
  }
  double hi;
  if (sup) {
    hi = *sup;
  } else {
    hi = market.tail_cutoff();
    int guard = 0;
    while (psi(market, hi) > y) {
      hi = 2.0 * hi + 1.0;
      if (++guard > 2000 || std::isinf(hi))
        throw PremiumNotFinite("psi_inverse: could not bracket the root");
    }
  }
  return numerics::find_root([&](double x) { return psi(market, x) - y; }, 0.0, hi);
}

PremiumQuote premium_diml(const Market &market, double d, double m) {
  if (!(d >= 0.0))
    throw std::domain_error("premium_diml: d must be >= 0");
  if (!(m >= d))
    throw std::domain_error("premium_diml: need d <= m");
  if (auto sup = market.loss().essential_sup(); sup && m > *sup * (1.0 + 1e-12))
    throw std::domain_error("premium_diml: m exceeds the essential supremum");

  const double L = market.loading();
  const auto above_d = market.distorted_integral(d, kInf);
  const auto above_m = market.distorted_integral(m, kInf);
  const auto below_d = market.distorted_integral(0.0, d);

  PremiumQuote q;
  q.pi_X = market.full_premium();
  q.pi_I = L * (above_d.value - above_m.value);
  // Retention survival is S(x) below d and S(x + m - d) from d on, so its
  // distorted integral splits into [0, d] and [m, M] of g(S).
  q.pi_R = L * (below_d.value + above_m.value);
  q.truncation_error_bound = L * (above_d.error + 2.0 * above_m.error + below_d.error) +
                             market.full_premium_error();
  return q;
}

StieltjesWeights stieltjes_weights(const Market &market, const QuantileGrid &grid) {
  const auto &loss = market.loss();
  const auto &g = market.distortion();
  const auto edges = grid.edges();
  const auto mid_loss = grid.loss();
  const double q_at_zero = loss.essential_sup().value_or(kInf);

  StieltjesWeights w;
  w.dg.resize(grid.size());
  w.cell_bound.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double hi_p = edges[i], lo_p = edges[i + 1];
    const double g_hi = g(hi_p), g_lo = g(lo_p);
    w.dg[i] = g_hi - g_lo;

    const double q_mid = mid_loss[i];
    const double q_hi_p = loss.quantile(hi_p);
    const double q_lo_p = lo_p == 0.0 ? q_at_zero : loss.quantile(lo_p);

    // Cell part below the midpoint: integral of (Q(p) - Q(mid)) dg.
    const auto lower_int = market.distorted_integral(q_mid, q_lo_p);
    double lower = lower_int.value;
    if (lo_p > 0.0)
      lower -= g_lo * (q_lo_p - q_mid);
    // Cell part above the midpoint: integral of (Q(mid) - Q(p)) dg.
    const auto upper_int = market.distorted_integral(q_hi_p, q_mid);
    const double upper = g_hi * (q_mid - q_hi_p) - upper_int.value;

    w.cell_bound[i] = std::max(0.0, lower) + std::max(0.0, upper) + lower_int.error +
                      upper_int.error;
  }
  return w;
}

StieltjesPremium premium_from_indemnity_quantile(const Market &market,
                                                 const QuantileGrid &grid) {
  return premium_from_indemnity_quantile(market, grid, stieltjes_weights(market, grid));
}

StieltjesPremium premium_from_indemnity_quantile(const Market &market,
                                                 const QuantileGrid &grid,
                                                 const StieltjesWeights &weights) {
  if (weights.dg.size() != grid.size())
    throw ValidationError("stieltjes weights do not match the grid");
  grid.validate();

  const std::size_t n = grid.size();
  double value = 0.0, bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ind = grid.indemnity(i);
    value += ind * weights.dg[i];

    const double tol = grid.tolerance(i);
    const double above = i > 0 ? grid.indemnity(i - 1) : 0.0;
    const bool pinned = i + 1 < n && std::abs(ind - above) <= tol &&
                        std::abs(grid.indemnity(i + 1) - ind) <= tol;
    if (!pinned)
      bound += weights.cell_bound[i];
  }
  return {market.loading() * value, market.loading() * bound};
}

} // namespace ruinopt
