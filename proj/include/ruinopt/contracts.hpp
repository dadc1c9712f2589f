#pragma once

#include "ruinopt/loss_model.hpp"
#include "ruinopt/premium.hpp"
#include "ruinopt/quantile_grid.hpp"

#include <cstddef>

namespace ruinopt {

/// Slack on the constraint w - pi_I >= d, relative to (1 + w). The optimal
/// contract makes the constraint bind, so an exact comparison would flip on
/// the last bit of the premium.
inline constexpr double kCapitalTolerance = 1e-12;

/// Deductible d and maximum limit m, 0 <= d <= m <= M. The indemnity is
/// 0 up to d, x - d between d and m, and m - d above m. m may be +inf when
/// the loss is unbounded (no limit).
struct DimlContract {
  double d = 0.0;
  double m = 0.0;

  /// Validates 0 <= d <= m <= M against `loss`.
  static DimlContract make(const LossModel &loss, double d, double m);
  /// d with m = M.
  static DimlContract unlimited(const LossModel &loss, double d);
  /// d = m = w.
  static DimlContract none(double w) { return {w, w}; }

  double p_d(const LossModel &loss) const { return loss.survival(d); }
  double p_m(const LossModel &loss) const { return loss.survival(m); }
};

double diml_retention(const DimlContract &c, double x);
double diml_indemnity(const DimlContract &c, double x);

/// Quantile of the retained loss R(X) at probability p in [0, 1].
double diml_retention_quantile(const LossModel &loss, const DimlContract &c, double p);

/// Survival function of R(X).
double diml_retention_survival(const LossModel &loss, const DimlContract &c, double x);

/// Samples the DIML retention quantile at the cell midpoints of a uniform grid.
QuantileGrid diml_grid(const LossModel &loss, const DimlContract &c, std::size_t cells);

/// R(x) = S_R^-1(S_X(x)) for the step retention quantile held by `grid`.
double retention_from_quantile(const LossModel &loss, const QuantileGrid &grid, double x);

/// P(R(X) > w - pi_I) for the DIML contract, with pi_I = Psi(d) - Psi(m).
/// Negative net capital gives 1.
double ruin_probability(const Market &market, const DimlContract &c, double w);

/// Same, with a precomputed premium.
double ruin_probability_given_premium(const LossModel &loss, const DimlContract &c,
                                      double w, double premium);

} // namespace ruinopt
