#pragma once

#include "ruinopt/contracts.hpp"
#include "ruinopt/premium.hpp"

#include <string_view>

namespace ruinopt {

enum class SolutionCase {
  ZeroDeductible,     // theta <= theta_s: d* = 0, spend all wealth on cover
  NoInsurance,        // theta > theta_s and w <= d_s
  PositiveDeductible, // theta > theta_s and d_s < w < w_s: d* = d_s
  SafeLevel           // w >= w_s: ruin avoided with d = d_s, m = M
};

std::string_view case_name(SolutionCase c);

struct Thresholds {
  double theta_s = 0.0;
  double d_s = 0.0;
  double w_s = 0.0;
};

struct Solution {
  SolutionCase kind = SolutionCase::NoInsurance;
  DimlContract contract;
  double premium = 0.0;
  double ruin_prob = 0.0;
  Thresholds thresholds;
};

/// Loading below which insurance is cheap enough for a zero deductible:
/// 1 / g(S_X(0)) - 1.
double theta_s(const Market &market);

/// Critical deductible, the minimiser of Phi: 0 when theta <= theta_s, else
/// S_X^-1(g^-1(1 / (1 + theta))).
double d_s(const Market &market);

/// Least wealth that avoids ruin surely: Phi(d_s).
double w_s(const Market &market);

Thresholds thresholds(const Market &market);

/// Ruin-minimising DIML contract for initial wealth w > 0.
Solution solve(const Market &market, double w);

} // namespace ruinopt
