#include "ruinopt/quantile_grid.hpp"

#include "ruinopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ruinopt {

QuantileGrid QuantileGrid::uniform(const LossModel &loss, std::size_t cells) {
  if (cells < 2)
    throw ValidationError("quantile grid: need at least 2 cells");
  const double s0 = loss.mass_above_zero();
  QuantileGrid g;
  g.edges_.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    g.edges_[i] = s0 * static_cast<double>(cells - i) / static_cast<double>(cells);
  g.loss_.resize(cells);
  for (std::size_t i = 0; i < cells; ++i)
    g.loss_[i] = loss.quantile(g.midpoint(i));
  g.retention_ = g.loss_;
  return g;
}

QuantileGrid QuantileGrid::with_retention(std::vector<double> retention) const {
  if (retention.size() != loss_.size())
    throw ValidationError("quantile grid: retention has wrong length");
  QuantileGrid g;
  g.edges_ = edges_;
  g.loss_ = loss_;
  g.retention_ = std::move(retention);
  g.validate();
  return g;
}

std::vector<double> QuantileGrid::indemnities() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i)
    out[i] = indemnity(i);
  return out;
}

double QuantileGrid::tolerance(std::size_t i) const {
  return 1e-12 * (1.0 + std::abs(loss_[i]));
}

void QuantileGrid::validate() const {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < size(); ++i) {
    const double tol = tolerance(i);
    bool ok = std::isfinite(retention_[i]) && retention_[i] >= -tol &&
              retention_[i] <= loss_[i] + tol;
    if (i > 0)
      ok = ok && retention_[i] >= retention_[i - 1] - tol &&
           indemnity(i) >= indemnity(i - 1) - tol;
    if (!ok)
      bad.push_back(i);
  }
  if (bad.empty())
    return;
  std::ostringstream msg;
  msg << "quantile grid is not admissible at " << bad.size() << " cell(s), first:";
  for (std::size_t k = 0; k < std::min<std::size_t>(bad.size(), 8); ++k)
    msg << ' ' << bad[k];
  throw ValidationError(msg.str(), std::move(bad));
}

bool QuantileGrid::admissible() const {
  try {
    validate();
    return true;
  } catch (const ValidationError &) {
    return false;
  }
}

double QuantileGrid::retention_quantile(double p) const {
  if (p >= edges_[0])
    return 0.0;
  // edges are descending: cell i holds p in [edges[i+1], edges[i]).
  auto it = std::lower_bound(edges_.begin(), edges_.end(), p, std::greater<>());
  const std::size_t i = static_cast<std::size_t>(it - edges_.begin()) - 1;
  return retention_[std::min(i, size() - 1)];
}

double QuantileGrid::retention_survival(double y) const {
  if (y < 0.0)
    return 1.0;
  double best = edges_[0];
  for (std::size_t i = 0; i < size(); ++i)
    if (retention_[i] <= y)
      best = std::min(best, edges_[i + 1]);
  return best;
}

} // namespace ruinopt
