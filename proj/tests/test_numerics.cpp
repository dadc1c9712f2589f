#include "oracles.hpp"
#include "ruinopt/normal.hpp"
#include "ruinopt/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace ruinopt;

TEST_CASE("integrate: smooth integrand") {
  auto r = numerics::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.error <= 1e-13);
}

TEST_CASE("integrate: kink at a cut point") {
  const std::vector<double> cuts{0.3};
  auto r = numerics::integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-14, cuts);
  CHECK(std::abs(r.value - 0.29) < 1e-14);
}

TEST_CASE("integrate: endpoint singularity is resolved adaptively") {
  auto r = numerics::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(std::abs(r.value - 2.0) < 1e-8);
}

TEST_CASE("integrate: empty interval") {
  auto r = numerics::integrate([](double) { return 1.0; }, 1.0, 1.0, 1e-12);
  CHECK(r.value == 0.0);
}

TEST_CASE("find_root: cube root of two") {
  double x = numerics::find_root([](double t) { return t * t * t - 2.0; }, 0.0, 2.0);
  CHECK(std::abs(x - std::cbrt(2.0)) < 1e-15);
}

TEST_CASE("find_root: root at an endpoint") {
  CHECK(numerics::find_root([](double t) { return t - 1.0; }, 1.0, 3.0) == 1.0);
}

TEST_CASE("find_root: unbracketed") {
  CHECK_THROWS_AS(numerics::find_root([](double t) { return t * t + 1.0; }, -1.0, 1.0),
                  std::domain_error);
}

TEST_CASE("normal distribution") {
  CHECK(normal::quantile(0.975) == doctest::Approx(oracle::kZ975).epsilon(1e-15));
  CHECK(normal::cdf(0.3) == doctest::Approx(oracle::kPhi03).epsilon(1e-15));
  CHECK(normal::sf(10.0) == doctest::Approx(oracle::kSf10).epsilon(1e-13));
  CHECK(normal::quantile(0.5) == 0.0);
  CHECK(std::isinf(normal::quantile(0.0)));
  CHECK(std::isinf(normal::quantile(1.0)));
  CHECK_THROWS(normal::quantile(1.5));
  for (double p : {1e-300, 1e-20, 1e-8, 0.01, 0.2, 0.49, 0.51, 0.8, 0.99}) {
    CAPTURE(p);
    CHECK(normal::cdf(normal::quantile(p)) == doctest::Approx(p).epsilon(1e-13));
  }
}
