#include "ruinopt/loss_model.hpp"

#include "ruinopt/errors.hpp"
#include "ruinopt/normal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ruinopt {

// Knots in ascending probability; values are decreasing.
struct EmpiricalCurve {
  std::vector<double> p;
  std::vector<double> x;
  std::vector<double> slope; // dx/dp at each knot, <= 0

  double s0() const { return p.back(); }
  double sup() const { return x.front(); }

  double eval(std::size_t k, double at) const {
    const double h = p[k + 1] - p[k];
    const double t = (at - p[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * x[k] + (t3 - 2 * t2 + t) * h * slope[k] +
           (-2 * t3 + 3 * t2) * x[k + 1] + (t3 - t2) * h * slope[k + 1];
  }

  double quantile(double at) const {
    if (at >= s0())
      return 0.0;
    if (at <= 0.0)
      return sup();
    auto it = std::upper_bound(p.begin(), p.end(), at);
    const std::size_t k = static_cast<std::size_t>(it - p.begin()) - 1;
    return eval(k, at);
  }

  double survival(double at) const {
    if (at <= 0.0)
      return s0();
    if (at >= sup())
      return 0.0;
    // x is descending; find k with x[k+1] <= at <= x[k].
    auto it = std::lower_bound(x.begin(), x.end(), at, std::greater<>());
    std::size_t k1 = static_cast<std::size_t>(it - x.begin());
    if (x[k1] == at)
      return p[k1];
    const std::size_t k = k1 - 1;
    double lo = p[k], hi = p[k + 1];
    for (;;) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi)
        break;
      if (eval(k, mid) > at)
        lo = mid;
      else
        hi = mid;
    }
    // S(at) = inf{p : Q(p) <= at}
    return eval(k, lo) <= at ? lo : hi;
  }
};

namespace {

void require(bool ok, const char *what) {
  if (!ok)
    throw ValidationError(what);
}

std::vector<double> pchip_slopes(const std::vector<double> &p,
                                 const std::vector<double> &x) {
  const std::size_t n = p.size();
  std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = p[k + 1] - p[k];
    delta[k] = (x[k + 1] - x[k]) / h[k];
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      d[k] = 0.0;
    } else {
      const double w1 = 2 * h[k] + h[k - 1];
      const double w2 = h[k] + 2 * h[k - 1];
      d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if ((s > 0) != (d0 > 0))
      s = 0.0;
    else if ((d0 > 0) != (d1 > 0) && std::abs(s) > 3 * std::abs(d0))
      s = 3 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

} // namespace

LossModel LossModel::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0, "exponential: rate must be > 0");
  return LossModel(Exponential{rate});
}

LossModel LossModel::pareto(double shape, double scale) {
  require(std::isfinite(shape) && shape > 1, "pareto: shape must be > 1");
  require(std::isfinite(scale) && scale > 0, "pareto: scale must be > 0");
  return LossModel(Pareto{shape, scale});
}

LossModel LossModel::uniform(double upper) {
  require(std::isfinite(upper) && upper > 0, "uniform: upper must be > 0");
  return LossModel(Uniform{upper});
}

LossModel LossModel::lognormal(double mu, double sigma) {
  require(std::isfinite(mu), "lognormal: mu must be finite");
  require(std::isfinite(sigma) && sigma > 0, "lognormal: sigma must be > 0");
  return LossModel(LogNormal{mu, sigma});
}

LossModel LossModel::atom_scaled(double q, LossModel inner) {
  require(q > 0 && q <= 1, "atom_scaled: q must lie in (0, 1]");
  return LossModel(
      AtomScaled{q, std::make_shared<const LossModel>(std::move(inner))});
}

LossModel load_empirical(std::span<const QuantilePoint> table) {
  if (table.size() < 4)
    throw ValidationError("empirical: need at least 4 points, got " +
                          std::to_string(table.size()));
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto [p, x] = table[i];
    bool ok = std::isfinite(p) && std::isfinite(x) && p > 0 && p <= 1 && x >= 0;
    if (i > 0)
      ok = ok && p < table[i - 1].p && x > table[i - 1].x;
    if (i == 0 && p == 1)
      ok = ok && x == 0;
    if (!ok)
      bad.push_back(i);
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "empirical: table must have strictly decreasing p in (0,1] and "
           "strictly increasing x >= 0; offending rows:";
    for (auto i : bad)
      msg << ' ' << i;
    throw ValidationError(msg.str(), bad);
  }

  // Ascending probability order.
  std::vector<double> p, x;
  const std::size_t n = table.size();
  const double tail_slope =
      (table[n - 1].x - table[n - 2].x) / (table[n - 2].p - table[n - 1].p);
  p.push_back(0.0);
  x.push_back(table[n - 1].x + tail_slope * table[n - 1].p);
  for (std::size_t i = n; i-- > 0;) {
    p.push_back(table[i].p);
    x.push_back(table[i].x);
  }
  if (x.back() > 0.0) {
    p.push_back(1.0);
    x.push_back(0.0);
  }

  auto curve = std::make_shared<EmpiricalCurve>();
  curve->slope = pchip_slopes(p, x);
  curve->p = std::move(p);
  curve->x = std::move(x);
  return LossModel(Empirical{std::move(curve)});
}

double LossModel::survival(double x) const {
  if (!(x >= 0.0))
    throw std::domain_error("survival: x must be >= 0");
  return std::visit(
      [x](const auto &f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return std::exp(-f.rate * x);
        } else if constexpr (std::is_same_v<T, Pareto>) {
          if (std::isinf(x))
            return 0.0;
          return std::exp(-f.shape * std::log1p(x / f.scale));
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return x >= f.upper ? 0.0 : 1.0 - x / f.upper;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          if (x == 0.0)
            return 1.0;
          return normal::sf((std::log(x) - f.mu) / f.sigma);
        } else if constexpr (std::is_same_v<T, AtomScaled>) {
          return f.q * f.inner->survival(x);
        } else {
          return f.curve->survival(x);
        }
      },
      family_);
}

double LossModel::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("quantile: p must lie in [0, 1]");
  if (p >= mass_above_zero())
    return 0.0;
  if (p == 0.0) {
    if (auto m = essential_sup())
      return *m;
    throw UnboundedError("quantile(0) is unbounded for " + describe());
  }
  return std::visit(
      [p](const auto &f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return -std::log(p) / f.rate;
        } else if constexpr (std::is_same_v<T, Pareto>) {
          return f.scale * std::expm1(-std::log(p) / f.shape);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return f.upper * (1.0 - p);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return std::exp(f.mu - f.sigma * normal::quantile(p));
        } else if constexpr (std::is_same_v<T, AtomScaled>) {
          return f.inner->quantile(p / f.q);
        } else {
          return f.curve->quantile(p);
        }
      },
      family_);
}

std::optional<double> LossModel::essential_sup() const {
  return std::visit(
      [](const auto &f) -> std::optional<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Uniform>)
          return f.upper;
        else if constexpr (std::is_same_v<T, AtomScaled>)
          return f.inner->essential_sup();
        else if constexpr (std::is_same_v<T, Empirical>)
          return f.curve->sup();
        else
          return std::nullopt;
      },
      family_);
}

double LossModel::upper_or_quantile(double p_min) const {
  if (auto m = essential_sup())
    return *m;
  return quantile(p_min);
}

double LossModel::mass_above_zero() const {
  return std::visit(
      [](const auto &f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, AtomScaled>)
          return f.q * f.inner->mass_above_zero();
        else if constexpr (std::is_same_v<T, Empirical>)
          return f.curve->s0();
        else
          return 1.0;
      },
      family_);
}

std::vector<double> LossModel::kinks() const {
  if (const auto *a = std::get_if<AtomScaled>(&family_))
    return a->inner->kinks();
  if (const auto *e = std::get_if<Empirical>(&family_)) {
    std::vector<double> out;
    for (double v : e->curve->x)
      if (v > 0.0 && v < e->curve->sup())
        out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  }
  return {};
}

std::string LossModel::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto &f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>)
          os << "exponential(rate=" << f.rate << ")";
        else if constexpr (std::is_same_v<T, Pareto>)
          os << "pareto(shape=" << f.shape << ", scale=" << f.scale << ")";
        else if constexpr (std::is_same_v<T, Uniform>)
          os << "uniform(upper=" << f.upper << ")";
        else if constexpr (std::is_same_v<T, LogNormal>)
          os << "lognormal(mu=" << f.mu << ", sigma=" << f.sigma << ")";
        else if constexpr (std::is_same_v<T, AtomScaled>)
          os << "atom_scaled(q=" << f.q << ", " << f.inner->describe() << ")";
        else
          os << "empirical(" << f.curve->p.size() << " knots)";
      },
      family_);
  return os.str();
}

} // namespace ruinopt
