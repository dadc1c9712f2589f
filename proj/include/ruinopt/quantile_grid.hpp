#pragma once

#include "ruinopt/loss_model.hpp"

#include <span>
#include <vector>

namespace ruinopt {

/// A discretised retention quantile function on a uniform probability grid.
///
/// Cell i covers [edges[i+1], edges[i]) with edges[0] = S_X(0+) and
/// edges[n] = 0. The retention quantile is constant on each cell (so the
/// function is right-continuous) and takes the value retention[i]; loss[i] is
/// the loss quantile at the cell midpoint. Indemnity values are
/// loss[i] - retention[i].
///
/// Admissibility, checked by validate():
///   - retention non-decreasing in i (non-increasing in p), and >= 0;
///   - retention[i] <= loss[i];
///   - indemnity non-decreasing in i.
class QuantileGrid {
public:
  /// No-insurance grid (retention = loss) with `cells` uniform cells.
  static QuantileGrid uniform(const LossModel &loss, std::size_t cells);

  /// Same layout as this grid, with new retention values. Validates.
  QuantileGrid with_retention(std::vector<double> retention) const;

  std::size_t size() const { return loss_.size(); }
  std::span<const double> edges() const { return edges_; }
  std::span<const double> loss() const { return loss_; }
  std::span<const double> retention() const { return retention_; }
  double midpoint(std::size_t i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }
  double indemnity(std::size_t i) const { return loss_[i] - retention_[i]; }
  std::vector<double> indemnities() const;

  /// Throws ValidationError listing the cells that break admissibility.
  void validate() const;
  bool admissible() const;

  /// Step lookup of the retention quantile; 0 for p >= edges[0].
  double retention_quantile(double p) const;

  /// Right-continuous inverse inf{p : retention_quantile(p) <= y}: the
  /// smallest lower cell edge whose retention is <= y. 1 for y < 0.
  double retention_survival(double y) const;

  /// Absolute slack used by validate() for cell i.
  double tolerance(std::size_t i) const;

private:
  QuantileGrid() = default;
  std::vector<double> edges_;
  std::vector<double> loss_;
  std::vector<double> retention_;
};

} // namespace ruinopt
