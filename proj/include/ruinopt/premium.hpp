#pragma once

#include "ruinopt/distortion.hpp"
#include "ruinopt/loss_model.hpp"
#include "ruinopt/numerics.hpp"
#include "ruinopt/quantile_grid.hpp"

#include <span>
#include <vector>

namespace ruinopt {

/// Quantile level below which unbounded losses are handled as a tail.
inline constexpr double kTailProbability = 1e-12;

enum class Quadrature {
  Auto,   // closed form where one is known, adaptive Gauss-Kronrod otherwise
  Numeric // always Gauss-Kronrod (used to cross-check the closed forms)
};

/// A loss, a distortion and a proportional loading theta >= 0.
/// Construction fails with PremiumNotFinite when pi_X diverges.
class Market {
public:
  Market(LossModel loss, Distortion distortion, double theta,
         Quadrature mode = Quadrature::Auto);

  const LossModel &loss() const { return loss_; }
  const Distortion &distortion() const { return distortion_; }
  double theta() const { return theta_; }
  double loading() const { return 1.0 + theta_; }
  Quadrature quadrature() const { return mode_; }

  /// Integral of g(S_X(t)) over [a, b]; b may be +inf. Error is the
  /// quadrature estimate plus any tail truncation bound.
  numerics::Integral distorted_integral(double a, double b) const;

  /// pi_X = Psi(0), cached at construction.
  double full_premium() const { return full_premium_; }
  double full_premium_error() const { return full_premium_error_; }

  /// x where numeric integration hands over to the geometric tail sum
  /// (M for bounded losses).
  double tail_cutoff() const { return cutoff_; }

private:
  numerics::Integral numeric_integral(double a, double b) const;
  numerics::Integral geometric_tail(double a, double b) const;

  LossModel loss_;
  Distortion distortion_;
  double theta_;
  Quadrature mode_;
  double cutoff_ = 0.0;
  numerics::Integral cutoff_tail_{};
  std::vector<double> kinks_;
  double full_premium_ = 0.0;
  double full_premium_error_ = 0.0;
};

/// Premium, retention-side value and full-coverage premium of a contract.
struct PremiumQuote {
  double pi_I = 0.0;
  double pi_R = 0.0;
  double pi_X = 0.0;
  double truncation_error_bound = 0.0;
};

/// Psi(x) = (1+theta) * integral_x^M g(S_X(t)) dt, for 0 <= x <= M
/// (x = +inf allowed for unbounded losses, giving 0).
double psi(const Market &market, double x);

/// Phi(x) = x + Psi(x).
double phi(const Market &market, double x);

/// The unique x in [0, M] with Psi(x) = y, for 0 <= y <= Psi(0).
/// y = 0 on an unbounded loss throws UnboundedError.
double psi_inverse(const Market &market, double y);

/// Premium of the deductible-with-limit contract (d, m): Psi(d) - Psi(m).
/// pi_R is computed separately from the retention's survival function so
/// pi_I + pi_R = pi_X is a genuine check.
PremiumQuote premium_diml(const Market &market, double d, double m);

/// Per-cell data for the Stieltjes premium rule on a fixed grid layout.
struct StieltjesWeights {
  std::vector<double> dg;         // g(edges[i]) - g(edges[i+1])
  std::vector<double> cell_bound; // integral of |Q_X(p) - Q_X(mid)| dg over the cell
};

StieltjesWeights stieltjes_weights(const Market &market, const QuantileGrid &grid);

struct StieltjesPremium {
  double value = 0.0;
  double bound = 0.0; // discretisation bound on |value - exact premium|
};

/// (1+theta) * sum_i indemnity_i * dg_i: midpoint Stieltjes rule for the
/// premium of the indemnity quantile implied by `grid`.
///
/// The bound adds, for every cell whose indemnity is not pinned constant by
/// both neighbours, the loss quantile's own variation across the cell
/// (indemnity and retention are comonotone, so the indemnity varies no more
/// than the loss does).
StieltjesPremium premium_from_indemnity_quantile(const Market &market,
                                                 const QuantileGrid &grid);
StieltjesPremium premium_from_indemnity_quantile(const Market &market,
                                                 const QuantileGrid &grid,
                                                 const StieltjesWeights &weights);

} // namespace ruinopt
