#include "ruinopt/verify.hpp"

#include "ruinopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace ruinopt::verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Runs fn(task) for task in [0, n_tasks) on `threads` workers. Each task
// writes only its own output slot, so the reduction order is fixed by the
// caller.
template <class Fn> void run_tasks(std::size_t n_tasks, unsigned threads, Fn &&fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_tasks)));
  if (threads == 1) {
    for (std::size_t t = 0; t < n_tasks; ++t)
      fn(t);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k)
    pool.emplace_back([&, k] {
      for (std::size_t t = k; t < n_tasks; t += threads)
        fn(t);
    });
  for (auto &th : pool)
    th.join();
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

void require_below_safe_level(const Market &market, double w) {
  if (!(w > 0.0))
    throw std::domain_error("oracle: wealth must be > 0");
  if (w >= w_s(market))
    throw std::domain_error("oracle: wealth must be below the safe level");
}

// Largest limit worth searching. A contract with d <= w and
// Psi(m) < Phi(d) - w leaves w - premium < d, so it ruins whenever the
// uninsured loss exceeds the capital left, which the m = d contract with the
// same capital already beats. Phi is max(1, theta)-Lipschitz, so the minimum
// over the d nodes is corrected by that much per half step on either side.
double affordable_limit(const Market &market, double w, std::span<const double> d_nodes,
                        double x_hi) {
  double phi_min = kInf;
  for (double d : d_nodes)
    phi_min = std::min(phi_min, phi(market, d));
  const double step = d_nodes.size() > 1 ? d_nodes[1] - d_nodes[0] : 0.0;
  const double floor = phi_min - std::max(1.0, market.theta()) * step - w;
  if (!(floor > 0.0))
    return x_hi;
  if (floor >= psi(market, 0.0))
    return 0.0;
  return std::min(x_hi, psi_inverse(market, floor));
}

struct Candidate {
  double ruin = kInf;
  double slack = -kInf;
  DimlContract contract;
  bool found = false;

  // Lower ruin wins; on ties the larger leftover capital wins.
  void offer(double r, double s, DimlContract c) {
    if (!found || r < ruin || (r == ruin && s > slack)) {
      ruin = r;
      slack = s;
      contract = c;
      found = true;
    }
  }
};

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix(seed ^ splitmix(stream + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterRng::next() {
  return splitmix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
}

double CounterRng::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

OracleReport grid_oracle(const Market &market, double w, std::size_t n_d,
                         std::size_t n_m, unsigned threads) {
  if (n_d < 16 || n_m < 16)
    throw std::domain_error("grid_oracle: need at least 16 nodes per axis");
  require_below_safe_level(market, w);
  const double x_hi = market.loss().upper_or_quantile(kGridTailProbability);
  const auto d_nodes = linspace(0.0, std::min(w, x_hi), n_d);
  const auto m_nodes = linspace(0.0, affordable_limit(market, w, d_nodes, x_hi), n_m);
  auto report = grid_oracle_on(market, w, d_nodes, m_nodes, threads);
  report.d_step = d_nodes[1] - d_nodes[0];
  report.m_step = m_nodes[1] - m_nodes[0];
  return report;
}

OracleReport grid_oracle_on(const Market &market, double w,
                            std::span<const double> d_nodes,
                            std::span<const double> m_nodes, unsigned threads) {
  require_below_safe_level(market, w);
  const auto &loss = market.loss();

  std::vector<double> psi_d(d_nodes.size()), psi_m(m_nodes.size());
  run_tasks(d_nodes.size(), threads, [&](std::size_t i) { psi_d[i] = psi(market, d_nodes[i]); });
  run_tasks(m_nodes.size(), threads, [&](std::size_t j) { psi_m[j] = psi(market, m_nodes[j]); });

  std::vector<Candidate> rows(d_nodes.size());
  std::vector<std::uint64_t> counts(d_nodes.size(), 0);
  run_tasks(d_nodes.size(), threads, [&](std::size_t i) {
    const double d = d_nodes[i];
    Candidate best;
    // m = d: no cover, no premium.
    best.offer(ruin_probability_given_premium(loss, {d, d}, w, 0.0), w - d, {d, d});
    std::uint64_t n = 1;
    for (std::size_t j = 0; j < m_nodes.size(); ++j) {
      const double m = m_nodes[j];
      if (m < d)
        continue;
      const double premium = psi_d[i] - psi_m[j];
      best.offer(ruin_probability_given_premium(loss, {d, m}, w, premium), w - premium - d,
                 {d, m});
      ++n;
    }
    rows[i] = best;
    counts[i] = n;
  });

  Candidate best;
  std::uint64_t cells = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    best.offer(rows[i].ruin, rows[i].slack, rows[i].contract);
    cells += counts[i];
  }

  OracleReport r;
  r.oracle = "grid";
  r.best_contract = best.contract;
  r.best_ruin_prob = best.ruin;
  r.solver_ruin_prob = solve(market, w).ruin_prob;
  r.gap = r.best_ruin_prob - r.solver_ruin_prob;
  r.tolerance = kGridTolerance;
  r.samples_or_cells = cells;
  return r;
}

QuantileGrid sample_admissible(const QuantileGrid &layout, std::uint64_t seed,
                               std::uint64_t index) {
  CounterRng rng(seed, index);
  const std::size_t n = layout.size();
  const auto loss = layout.loss();

  std::vector<double> fraction(n);
  if (index % 2 == 0) {
    for (auto &f : fraction)
      f = rng.uniform();
  } else {
    const std::size_t blocks = 1 + rng.next() % 8;
    std::vector<std::size_t> starts{0};
    for (std::size_t b = 1; b < blocks; ++b)
      starts.push_back(rng.next() % n);
    std::sort(starts.begin(), starts.end());
    starts.push_back(n);
    for (std::size_t b = 0; b + 1 < starts.size(); ++b) {
      const double pick = rng.uniform();
      const double f = pick < 1.0 / 3.0 ? 0.0 : (pick < 2.0 / 3.0 ? 1.0 : rng.uniform());
      for (std::size_t i = starts[b]; i < starts[b + 1]; ++i)
        fraction[i] = f;
    }
  }

  std::vector<double> r(n);
  double retained = 0.0, previous = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    retained += fraction[i] * (loss[i] - previous);
    previous = loss[i];
    r[i] = std::min(retained, loss[i]);
  }
  return layout.with_retention(std::move(r));
}

OracleReport random_admissible_oracle(const Market &market, double w,
                                      std::size_t n_samples, std::size_t n_grid,
                                      std::uint64_t seed, unsigned threads,
                                      std::span<const QuantileGrid> extra) {
  if (n_grid < 256)
    throw std::domain_error("random_admissible_oracle: need n_grid >= 256");
  require_below_safe_level(market, w);

  const auto layout = QuantileGrid::uniform(market.loss(), n_grid);
  const auto weights = stieltjes_weights(market, layout);

  struct Outcome {
    double ruin = kInf;
    double premium = 0.0;
    double bound = 0.0;
    bool admissible = false;
  };
  auto evaluate = [&](const QuantileGrid &g) {
    Outcome o;
    o.admissible = g.admissible();
    const auto price = premium_from_indemnity_quantile(market, g, weights);
    o.premium = price.value;
    o.bound = price.bound;
    o.ruin = g.retention_survival(w - price.value);
    return o;
  };

  std::vector<Outcome> outcomes(n_samples + extra.size());
  run_tasks(n_samples, threads, [&](std::size_t k) {
    outcomes[k] = evaluate(sample_admissible(layout, seed, k));
  });
  for (std::size_t k = 0; k < extra.size(); ++k)
    outcomes[n_samples + k] = evaluate(extra[k]);

  OracleReport r;
  r.oracle = "random_admissible";
  r.seed = seed;
  r.samples_or_cells = outcomes.size();
  SampleDescriptor best;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    r.admissible += outcomes[k].admissible ? 1 : 0;
    if (outcomes[k].ruin < r.best_ruin_prob) {
      r.best_ruin_prob = outcomes[k].ruin;
      best = {k < n_samples ? k : k - n_samples, k >= n_samples, outcomes[k].premium,
              outcomes[k].bound};
    }
  }
  r.best_sample = best;
  r.solver_ruin_prob = solve(market, w).ruin_prob;
  r.gap = r.best_ruin_prob - r.solver_ruin_prob;
  r.tolerance = kRandomTolerance;
  return r;
}

QuantileGrid upper_envelope(const QuantileGrid &layout, std::size_t pinned, double value) {
  if (pinned >= layout.size())
    throw std::out_of_range("upper_envelope: pinned cell out of range");
  const auto loss = layout.loss();
  if (!(value >= 0.0 && value <= loss[pinned]))
    throw std::domain_error("upper_envelope: pinned value outside [0, loss]");
  std::vector<double> r(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i)
    r[i] = i <= pinned ? std::min(loss[i], value) : value + (loss[i] - loss[pinned]);
  return layout.with_retention(std::move(r));
}

MonteCarloResult monte_carlo_ruin(const Market &market, const DimlContract &c, double w,
                                  std::uint64_t n_paths, std::uint64_t seed,
                                  unsigned threads) {
  if (n_paths < 10000)
    throw std::domain_error("monte_carlo_ruin: need at least 10^4 paths");
  if (!(w > 0.0))
    throw std::domain_error("monte_carlo_ruin: wealth must be > 0");
  const auto &loss = market.loss();
  const double premium = psi(market, c.d) - psi(market, c.m);
  const double threshold = w - premium + kCapitalTolerance * (1.0 + std::abs(w));

  constexpr std::uint64_t kBlock = 1 << 16;
  const std::size_t blocks = static_cast<std::size_t>((n_paths + kBlock - 1) / kBlock);
  std::vector<std::uint64_t> ruined(blocks, 0);
  run_tasks(blocks, threads, [&](std::size_t b) {
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min<std::uint64_t>(n_paths, begin + kBlock);
    std::uint64_t count = 0;
    for (std::uint64_t path = begin; path < end; ++path) {
      CounterRng rng(seed, path);
      const double x = loss.quantile(rng.uniform());
      if (diml_retention(c, x) > threshold)
        ++count;
    }
    ruined[b] = count;
  });

  MonteCarloResult out;
  out.paths = n_paths;
  out.seed = seed;
  for (auto k : ruined)
    out.ruined += k;
  out.estimate = static_cast<double>(out.ruined) / static_cast<double>(n_paths);
  out.std_err = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(n_paths));
  return out;
}

double diml_var(const Market &market, const DimlContract &c, double alpha) {
  const double premium = psi(market, c.d) - psi(market, c.m);
  return premium + diml_retention_quantile(market.loss(), c, alpha);
}

DualityReport var_duality_check(const Market &market, double w, std::size_t n_grid,
                                unsigned threads) {
  if (n_grid < 16)
    throw std::domain_error("var_duality_check: need n_grid >= 16");
  require_below_safe_level(market, w);
  const auto &loss = market.loss();
  const double alpha = solve(market, w).ruin_prob;
  const double q_alpha = loss.quantile(alpha);
  const double s0 = loss.mass_above_zero();

  const double x_hi = loss.upper_or_quantile(kGridTailProbability);
  const auto d_nodes = linspace(0.0, std::min(w, x_hi), n_grid);
  const auto m_nodes = linspace(0.0, x_hi, n_grid);
  std::vector<double> psi_d(n_grid), psi_m(n_grid), p_d(n_grid), p_m(n_grid);
  run_tasks(n_grid, threads, [&](std::size_t i) {
    psi_d[i] = psi(market, d_nodes[i]);
    psi_m[i] = psi(market, m_nodes[i]);
    p_d[i] = loss.survival(d_nodes[i]);
    p_m[i] = loss.survival(m_nodes[i]);
  });

  // Retention quantile at alpha, branch by branch.
  auto var_at = [&](double d, double m, double pd, double pm, double premium) {
    double r;
    if (alpha >= s0)
      r = 0.0;
    else if (alpha < pm)
      r = q_alpha - (m - d);
    else if (alpha < pd)
      r = d;
    else
      r = q_alpha;
    return premium + r;
  };

  struct RowBest {
    double var = kInf;
    DimlContract c;
  };
  std::vector<RowBest> rows(n_grid);
  run_tasks(n_grid, threads, [&](std::size_t i) {
    const double d = d_nodes[i];
    RowBest best{var_at(d, d, p_d[i], p_d[i], 0.0), {d, d}};
    for (std::size_t j = 0; j < n_grid; ++j) {
      if (m_nodes[j] < d)
        continue;
      const double v = var_at(d, m_nodes[j], p_d[i], p_m[j], psi_d[i] - psi_m[j]);
      if (v < best.var)
        best = {v, {d, m_nodes[j]}};
    }
    rows[i] = best;
  });

  DualityReport rep;
  rep.alpha = alpha;
  rep.min_var = kInf;
  for (const auto &row : rows)
    if (row.var < rep.min_var) {
      rep.min_var = row.var;
      rep.argmin = row.c;
    }
  rep.gap = rep.min_var - w;
  const double d_step = d_nodes[1] - d_nodes[0];
  const double m_step = m_nodes[1] - m_nodes[0];
  // |dVaR/dd| = |Phi'(d)| <= max(1, theta); |dVaR/dm| = (1+theta) g(S(m)) <= 1+theta.
  rep.tolerance = std::max(1.0, market.theta()) * d_step + market.loading() * m_step;
  rep.passed = rep.gap >= -kGridTolerance * (1.0 + w) && rep.gap <= rep.tolerance;
  return rep;
}

} // namespace ruinopt::verify
