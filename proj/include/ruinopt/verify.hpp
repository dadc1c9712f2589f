#pragma once

#include "ruinopt/contracts.hpp"
#include "ruinopt/premium.hpp"
#include "ruinopt/quantile_grid.hpp"
#include "ruinopt/solver.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ruinopt::verify {

/// Upper limit of the contract grids for unbounded losses.
inline constexpr double kGridTailProbability = 1e-9;
/// Allowed undercut of the solver by the exact-contract grid search.
inline constexpr double kGridTolerance = 1e-9;
/// Allowed undercut by the discretised random search.
inline constexpr double kRandomTolerance = 1e-3;

/// Counter-based generator: draw k of stream s depends only on (seed, s, k),
/// so results do not depend on how streams are spread over threads.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  /// Uniform on (0, 1), never 0 or 1.
  double uniform();

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Describes the best sample found by the random oracle.
struct SampleDescriptor {
  std::size_t index = 0; // position in the sample sequence
  bool forced = false;   // true when it came from the caller's extra grids
  double premium = 0.0;
  double premium_bound = 0.0;
};

struct OracleReport {
  std::string oracle; // "grid" or "random_admissible"
  std::optional<DimlContract> best_contract;
  std::optional<SampleDescriptor> best_sample;
  double best_ruin_prob = 1.0;
  double solver_ruin_prob = 0.0;
  double gap = 0.0; // best - solver
  double tolerance = 0.0;
  std::uint64_t samples_or_cells = 0;
  std::uint64_t admissible = 0; // random oracle only
  std::uint64_t seed = 0;
  double d_step = 0.0; // grid oracle only
  double m_step = 0.0;

  bool passed() const { return gap >= -tolerance; }
};

/// Ruin probabilities of every DIML contract on the n_d x n_m grid
/// 0 <= d <= min(w, x_hi), 0 <= m <= m_hi, d <= m, plus
/// the no-insurance contract m = d for every d. The minimiser is reported;
/// ties go to the contract leaving the most capital after premium and
/// deductible. x_hi is M or Q(1e-9); m_hi <= x_hi drops limits so high that
/// the premium pushes net capital below d for every d on the grid, since those
/// contracts never beat no insurance. Requires w < w_s and n_d, n_m >= 16.
OracleReport grid_oracle(const Market &market, double w, std::size_t n_d,
                         std::size_t n_m, unsigned threads = 1);

/// Same search over explicit node sets.
OracleReport grid_oracle_on(const Market &market, double w,
                            std::span<const double> d_nodes,
                            std::span<const double> m_nodes, unsigned threads = 1);

/// Sample `index` of the random admissible family on `layout`: each loss
/// quantile increment is split between retention and indemnity by a fraction
/// in [0, 1]. Even indices draw an independent uniform fraction per cell; odd
/// indices draw up to 8 blocks, each fully retained, fully ceded, or split at
/// one uniform fraction (layers and proportional pieces).
QuantileGrid sample_admissible(const QuantileGrid &layout, std::uint64_t seed,
                               std::uint64_t index);

/// Best ruin probability over `n_samples` random admissible retention
/// quantiles (plus `extra`), each priced with the Stieltjes rule. A sample's
/// ruin is the grid-inverse at net capital w - premium; the premium's
/// discretisation bound is reported with the best sample.
OracleReport random_admissible_oracle(const Market &market, double w,
                                      std::size_t n_samples, std::size_t n_grid,
                                      std::uint64_t seed, unsigned threads = 1,
                                      std::span<const QuantileGrid> extra = {});

/// Pointwise largest admissible retention on `grid`'s layout whose value in
/// cell `pinned` equals `value`: min(loss, value) above the pin and
/// value + (loss - loss[pinned]) below it. This is the DIML shape.
QuantileGrid upper_envelope(const QuantileGrid &layout, std::size_t pinned, double value);

struct MonteCarloResult {
  double estimate = 0.0;
  double std_err = 0.0;
  std::uint64_t paths = 0;
  std::uint64_t ruined = 0;
  std::uint64_t seed = 0;
};

/// Frequency of diml_retention(X) > w - pi_I with X = S_X^-1(U) and
/// per-path counter-based uniforms. Requires n_paths >= 10^4.
MonteCarloResult monte_carlo_ruin(const Market &market, const DimlContract &c,
                                  double w, std::uint64_t n_paths,
                                  std::uint64_t seed, unsigned threads = 1);

/// VaR_alpha(R(X) + pi_I) = pi_I + S_R^-1(alpha) for a DIML contract.
double diml_var(const Market &market, const DimlContract &c, double alpha);

struct DualityReport {
  double alpha = 0.0;     // the solver's minimum ruin probability
  double min_var = 0.0;   // min over the contract grid of VaR_alpha
  double gap = 0.0;       // min_var - w
  double tolerance = 0.0; // VaR change across one grid cell
  DimlContract argmin;
  bool passed = false;
};

/// Minimum of VaR_{alpha*}(R(X) + pi_I) over an n x n DIML grid, alpha* the
/// solver's ruin probability; should equal w up to one grid cell.
DualityReport var_duality_check(const Market &market, double w, std::size_t n_grid,
                                unsigned threads = 1);

} // namespace ruinopt::verify
