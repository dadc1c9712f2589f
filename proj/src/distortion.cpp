#include "ruinopt/distortion.hpp"

#include "ruinopt/errors.hpp"
#include "ruinopt/normal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ruinopt {

Distortion Distortion::identity() { return Distortion(IdentityDistortion{}); }

Distortion Distortion::proportional_hazard(double c) {
  if (!(c > 0 && c <= 1))
    throw ValidationError("proportional_hazard: c must lie in (0, 1]");
  return Distortion(ProportionalHazard{c});
}

Distortion Distortion::dual_power(double k) {
  if (!(std::isfinite(k) && k >= 1))
    throw ValidationError("dual_power: k must be >= 1");
  return Distortion(DualPower{k});
}

Distortion Distortion::wang(double lambda) {
  if (!std::isfinite(lambda))
    throw ValidationError("wang: lambda must be finite");
  return Distortion(WangTransform{lambda});
}

bool Distortion::is_identity() const {
  if (std::holds_alternative<IdentityDistortion>(family_))
    return true;
  if (auto *ph = std::get_if<ProportionalHazard>(&family_))
    return ph->c == 1.0;
  if (auto *dp = std::get_if<DualPower>(&family_))
    return dp->k == 1.0;
  return std::get<WangTransform>(family_).lambda == 0.0;
}

double Distortion::operator()(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("distortion: p must lie in [0, 1]");
  if (p == 0.0 || p == 1.0)
    return p;
  return std::visit(
      [p](const auto &f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IdentityDistortion>)
          return p;
        else if constexpr (std::is_same_v<T, ProportionalHazard>)
          return std::pow(p, f.c);
        else if constexpr (std::is_same_v<T, DualPower>)
          return -std::expm1(f.k * std::log1p(-p));
        else {
          if (f.lambda == 0.0)
            return p;
          return normal::cdf(normal::quantile(p) + f.lambda);
        }
      },
      family_);
}

double Distortion::inverse(double y) const {
  if (!(y >= 0.0 && y <= 1.0))
    throw std::domain_error("distortion inverse: y must lie in [0, 1]");
  if (y == 0.0 || y == 1.0)
    return y;
  return std::visit(
      [y](const auto &f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IdentityDistortion>)
          return y;
        else if constexpr (std::is_same_v<T, ProportionalHazard>)
          return std::pow(y, 1.0 / f.c);
        else if constexpr (std::is_same_v<T, DualPower>)
          return -std::expm1(std::log1p(-y) / f.k);
        else {
          if (f.lambda == 0.0)
            return y;
          return normal::cdf(normal::quantile(y) - f.lambda);
        }
      },
      family_);
}

std::string Distortion::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto &f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IdentityDistortion>)
          os << "identity";
        else if constexpr (std::is_same_v<T, ProportionalHazard>)
          os << "proportional_hazard(c=" << f.c << ")";
        else if constexpr (std::is_same_v<T, DualPower>)
          os << "dual_power(k=" << f.k << ")";
        else
          os << "wang(lambda=" << f.lambda << ")";
      },
      family_);
  return os.str();
}

} // namespace ruinopt
