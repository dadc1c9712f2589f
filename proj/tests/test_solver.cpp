#include "fixtures.hpp"
#include "oracles.hpp"
#include "ruinopt/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace ruinopt;

namespace {

const LossModel kExp = LossModel::exponential(1.0);
const LossModel kAtom = LossModel::atom_scaled(0.5, LossModel::exponential(1.0));

void check_binding(const Market &m, const Solution &s, double w) {
  if (s.kind == SolutionCase::ZeroDeductible || s.kind == SolutionCase::PositiveDeductible) {
    CHECK(std::abs(s.contract.d + s.premium - w) <= 1e-9 * (1.0 + w));
    CHECK(s.ruin_prob == doctest::Approx(m.loss().survival(s.contract.m)).epsilon(1e-10));
  }
}

} // namespace

TEST_CASE("theta_s") {
  CHECK(theta_s(Market(kExp, Distortion::wang(0.4), 0.1)) == 0.0);
  CHECK(theta_s(Market(kAtom, Distortion::identity(), 0.1)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(theta_s(Market(kAtom, Distortion::proportional_hazard(0.5), 0.1)) ==
        doctest::Approx(oracle::kThetaSAtomPh).epsilon(1e-15));
}

TEST_CASE("d_s") {
  CHECK(d_s(Market(kExp, Distortion::identity(), 0.0)) == 0.0);
  CHECK(d_s(Market(kExp, Distortion::identity(), 0.25)) == doctest::Approx(oracle::kLn125).epsilon(1e-14));
  CHECK(d_s(Market(kExp, Distortion::proportional_hazard(0.5), 0.25)) ==
        doctest::Approx(oracle::kDsPh).epsilon(1e-14));
}

TEST_CASE("w_s") {
  CHECK(w_s(Market(kExp, Distortion::identity(), 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w_s(Market(kExp, Distortion::identity(), 0.25)) == doctest::Approx(oracle::kWs025).epsilon(1e-15));
  CHECK(w_s(Market(kExp, Distortion::proportional_hazard(0.5), 0.25)) ==
        doctest::Approx(oracle::kWsPh).epsilon(1e-14));
  CHECK(w_s(Market(LossModel::uniform(1.0), Distortion::identity(), 0.0)) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("solve: case (i), zero deductible") {
  const Market m(kExp, Distortion::identity(), 0.0);
  const auto s = solve(m, 0.5);
  CHECK(s.kind == SolutionCase::ZeroDeductible);
  CHECK(s.contract.d == 0.0);
  CHECK(s.contract.m == doctest::Approx(oracle::kLn2).epsilon(1e-12));
  CHECK(s.ruin_prob == doctest::Approx(0.5).epsilon(1e-12));
  check_binding(m, s, 0.5);
}

TEST_CASE("solve: case (ii), no insurance") {
  const Market m(kExp, Distortion::identity(), 0.25);
  const auto s = solve(m, 0.2);
  CHECK(s.kind == SolutionCase::NoInsurance);
  CHECK(s.premium == 0.0);
  CHECK(s.contract.d == 0.2);
  CHECK(s.contract.m == 0.2);
  CHECK(s.ruin_prob == doctest::Approx(oracle::kExpMinus02).epsilon(1e-15));
}

TEST_CASE("solve: case (iii), positive deductible") {
  const Market m(kExp, Distortion::identity(), 0.25);
  const auto s = solve(m, 0.8);
  CHECK(s.kind == SolutionCase::PositiveDeductible);
  CHECK(s.contract.d == doctest::Approx(oracle::kLn125).epsilon(1e-14));
  CHECK(s.contract.m == doctest::Approx(oracle::kMCase3).epsilon(1e-12));
  CHECK(s.ruin_prob == doctest::Approx(oracle::kRuinCase3).epsilon(1e-12));
  check_binding(m, s, 0.8);

  const Market ph(kExp, Distortion::proportional_hazard(0.5), 0.25);
  const auto t = solve(ph, 0.8);
  CHECK(t.kind == SolutionCase::PositiveDeductible);
  CHECK(t.contract.d == doctest::Approx(oracle::kDsPh).epsilon(1e-14));
  CHECK(t.contract.m == doctest::Approx(oracle::kMPhCase3).epsilon(1e-12));
  CHECK(t.ruin_prob == doctest::Approx(oracle::kRuinPhCase3).epsilon(1e-12));
}

TEST_CASE("solve: atom case (i)") {
  const Market m(kAtom, Distortion::identity(), 0.5);
  const auto s = solve(m, 0.3);
  CHECK(s.kind == SolutionCase::ZeroDeductible);
  CHECK(s.contract.m == doctest::Approx(oracle::kMinusLn06).epsilon(1e-12));
  CHECK(s.ruin_prob == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("solve: safe level") {
  const Market m(kExp, Distortion::identity(), 0.25);
  const auto s = solve(m, 1.5);
  CHECK(s.kind == SolutionCase::SafeLevel);
  CHECK(s.ruin_prob == 0.0);
  CHECK(s.contract.d == doctest::Approx(oracle::kLn125).epsilon(1e-14));
  CHECK(std::isinf(s.contract.m));

  const Market u(LossModel::uniform(1.0), Distortion::identity(), 0.0);
  const auto t = solve(u, 0.5);
  CHECK(t.kind == SolutionCase::SafeLevel);
  CHECK(t.contract.m == 1.0);
}

TEST_CASE("threshold ties: theta = theta_s is case (i), w = d_s is case (ii)") {
  // w = d_s is case (ii); theta = theta_s is case (i).
  const Market m(kExp, Distortion::identity(), 0.25);
  CHECK(solve(m, d_s(m)).kind == SolutionCase::NoInsurance);
  const Market a(kAtom, Distortion::identity(), 1.0);
  CHECK(solve(a, 0.3).kind == SolutionCase::ZeroDeductible);
}

TEST_CASE("invalid wealth") {
  const Market m(kExp, Distortion::identity(), 0.25);
  CHECK_THROWS(solve(m, 0.0));
  CHECK_THROWS(solve(m, std::numeric_limits<double>::quiet_NaN()));
}

TEST_CASE("binding constraint and m* < M across markets") {
  for (const auto &[name, loss] : fixtures::losses())
    for (const auto &g : fixtures::distortions())
      for (double theta : {0.0, 0.1, 0.25, 1.0}) {
        CAPTURE(name);
        CAPTURE(g.describe());
        CAPTURE(theta);
        const Market m(loss, g, theta);
        const auto th = thresholds(m);
        for (int k = 1; k <= 5; ++k) {
          const double w = th.d_s + (th.w_s - th.d_s) * k / 6.0;
          const auto s = solve(m, w);
          check_binding(m, s, w);
          if (const auto sup = loss.essential_sup())
            CHECK(s.contract.m < *sup);
        }
      }
}

TEST_CASE("continuity at theta_s") {
  const double ts = 1.0;
  const double w = 0.3;
  const auto at = solve(Market(kAtom, Distortion::identity(), ts), w);
  double prev_d = 1.0;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const auto s = solve(Market(kAtom, Distortion::identity(), ts + eps), w);
    CHECK(s.kind == SolutionCase::PositiveDeductible);
    CHECK(s.contract.d < prev_d);
    prev_d = s.contract.d;
    CHECK(std::abs(s.contract.m - at.contract.m) <= 10 * eps);
  }
  CHECK(prev_d < 1e-7);
}

TEST_CASE("d* does not depend on wealth; ruin decreases with wealth") {
  for (const auto &[name, loss] : fixtures::losses()) {
    CAPTURE(name);
    const Market m(loss, Distortion::proportional_hazard(0.5), 0.25);
    const auto th = thresholds(m);
    double prev_ruin = 1.0;
    for (int k = 1; k <= 10; ++k) {
      const double w = th.d_s + (th.w_s - th.d_s) * k / 11.0;
      const auto s = solve(m, w);
      CHECK(s.contract.d == th.d_s);
      CHECK(s.ruin_prob < prev_ruin);
      prev_ruin = s.ruin_prob;
    }
  }
}
