#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ruinopt {

class LossModel;

struct Exponential {
  double rate;
};

/// Lomax form: S(x) = (1 + x/scale)^(-shape), shape > 1.
struct Pareto {
  double shape;
  double scale;
};

struct Uniform {
  double upper;
};

struct LogNormal {
  double mu;
  double sigma;
};

/// X = B * Y with P(B = 1) = q, B independent of Y.
struct AtomScaled {
  double q;
  std::shared_ptr<const LossModel> inner;
};

/// One row of an empirical quantile table: quantile(p) = x.
struct QuantilePoint {
  double p;
  double x;
};

struct EmpiricalCurve;

/// Monotone piecewise-cubic interpolant of a quantile table.
struct Empirical {
  std::shared_ptr<const EmpiricalCurve> curve;
};

/// A non-negative loss X described by its survival function S(x) = P(X > x)
/// and its right-continuous inverse (the quantile function).
///
/// Immutable; copies share any heavy state.
class LossModel {
public:
  using Family =
      std::variant<Exponential, Pareto, Uniform, LogNormal, AtomScaled, Empirical>;

  static LossModel exponential(double rate);
  static LossModel pareto(double shape, double scale);
  static LossModel uniform(double upper);
  static LossModel lognormal(double mu, double sigma);
  static LossModel atom_scaled(double q, LossModel inner);

  const Family &family() const { return family_; }

  /// P(X > x). Throws std::domain_error for negative or NaN x.
  double survival(double x) const;

  /// inf{x >= 0 : S(x) <= p}. Zero for p >= s0. At p = 0 returns M when the
  /// support is bounded and throws UnboundedError otherwise.
  double quantile(double p) const;

  /// Essential supremum M; nullopt when X is unbounded.
  std::optional<double> essential_sup() const;
  bool bounded() const { return essential_sup().has_value(); }

  /// M if bounded, else quantile(p_min).
  double upper_or_quantile(double p_min) const;

  /// S(0+) = P(X > 0).
  double mass_above_zero() const;

  /// Points in (0, M) where S is not smooth (empirical knots).
  std::vector<double> kinks() const;

  std::string describe() const;

private:
  explicit LossModel(Family f) : family_(std::move(f)) {}
  friend LossModel load_empirical(std::span<const QuantilePoint> table);

  Family family_;
};

/// Builds an Empirical loss from a quantile table. Probabilities must be
/// strictly decreasing in (0, 1], values strictly increasing and >= 0, with at
/// least four rows. Throws ValidationError naming the offending rows.
///
/// Below the smallest tabulated probability the quantile is extended linearly
/// with the last secant slope, giving a finite support. Above the largest one
/// it is joined to (1, 0) unless the first value is already 0, in which case
/// the first probability becomes S(0+).
LossModel load_empirical(std::span<const QuantilePoint> table);

} // namespace ruinopt
