#pragma once

#include <string>
#include <variant>

namespace ruinopt {

struct IdentityDistortion {};

/// g(p) = p^c, c in (0, 1].
struct ProportionalHazard {
  double c;
};

/// g(p) = 1 - (1 - p)^k, k >= 1.
struct DualPower {
  double k;
};

/// g(p) = Phi(Phi^-1(p) + lambda).
struct WangTransform {
  double lambda;
};

/// A strictly increasing map g: [0,1] -> [0,1] with g(0) = 0 and g(1) = 1.
/// Concavity is not assumed.
class Distortion {
public:
  using Family =
      std::variant<IdentityDistortion, ProportionalHazard, DualPower, WangTransform>;

  static Distortion identity();
  static Distortion proportional_hazard(double c);
  static Distortion dual_power(double k);
  static Distortion wang(double lambda);

  const Family &family() const { return family_; }
  bool is_identity() const;

  /// Throws std::domain_error outside [0, 1].
  double operator()(double p) const;
  double inverse(double y) const;

  std::string describe() const;

private:
  explicit Distortion(Family f) : family_(f) {}
  Family family_;
};

} // namespace ruinopt
