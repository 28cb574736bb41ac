#include <cmath>
#include <vector>

#include "doctest.h"
#include "nwig/errors.hpp"
#include "nwig/quadrature.hpp"
#include "oracles.hpp"

using namespace nwig;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

TEST_CASE("trapezoid handles degenerate and exact cases") {
  CHECK(trapezoid({}, 0.1) == 0.0);
  CHECK(trapezoid({3.0}, 0.1) == 0.0);
  // Exact for affine data.
  std::vector<double> line;
  for (int i = 0; i <= 10; ++i) line.push_back(2.0 + 3.0 * (0.25 * i));
  // Integral of 2 + 3 t over [0, 2.5] = 2*2.5 + 1.5*6.25.
  CHECK(trapezoid(line, 0.25) == doctest::Approx(2.0 * 2.5 + 1.5 * 6.25).epsilon(1e-15));
  // Converges at second order for smooth data.
  auto sin_err = [](int n) {
    std::vector<double> v;
    const double h = 3.14159265358979323846 / n;
    for (int i = 0; i <= n; ++i) v.push_back(std::sin(i * h));
    return std::abs(trapezoid(v, h) - 2.0);
  };
  CHECK(sin_err(64) < 1e-3);
  CHECK(sin_err(128) / sin_err(64) == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("Gauss-Hermite order 5 matches the classical table") {
  // Abramowitz & Stegun, Table 25.10 (orthogonal to the implementation,
  // which builds rules by Newton iteration on the recurrence).
  const GaussHermiteRule rule = gauss_hermite(5);
  REQUIRE(rule.nodes.size() == 5);
  REQUIRE(rule.weights.size() == 5);
  const std::vector<double> nodes = {-2.020182870456086, -0.958572464613819, 0.0,
                                     0.958572464613819, 2.020182870456086};
  const std::vector<double> weights = {0.019953242059046, 0.393619323152241,
                                       0.945308720482942, 0.393619323152241,
                                       0.019953242059046};
  for (int i = 0; i < 5; ++i) {
    CHECK(rule.nodes[i] == doctest::Approx(nodes[i]).epsilon(1e-12));
    CHECK(rule.weights[i] == doctest::Approx(weights[i]).epsilon(1e-12));
  }
}

TEST_CASE("Gauss-Hermite rules integrate Hermite-weighted moments exactly") {
  for (int order : {1, 2, 8, 64, 256}) {
    CAPTURE(order);
    const GaussHermiteRule rule = gauss_hermite(order);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));

    // Nodes ascending and symmetric, weights positive.
    double sum_w = 0.0;
    double odd_moment = 0.0;
    double second = 0.0;
    for (int i = 0; i < order; ++i) {
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[order - 1 - i]).epsilon(1e-13));
      CHECK(rule.weights[i] > 0.0);
      sum_w += rule.weights[i];
      odd_moment += rule.weights[i] * std::pow(rule.nodes[i], 3);
      second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    // Integral exp(-t^2) dt = sqrt(pi); t^2 exp(-t^2) dt = sqrt(pi)/2.
    CHECK(sum_w == doctest::Approx(kSqrtPi).epsilon(1e-13));
    if (order >= 2) {
      CHECK(second == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-12));
      CHECK(odd_moment == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("Gauss-Hermite converges on a non-polynomial integrand") {
  // Integral cos(b t) exp(-t^2) dt = sqrt(pi) exp(-b^2/4).
  const double b = 3.0;
  const GaussHermiteRule rule = gauss_hermite(48);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * std::cos(b * rule.nodes[i]);
  }
  CHECK(sum == doctest::Approx(kSqrtPi * std::exp(-b * b / 4.0)).epsilon(1e-12));
}

TEST_CASE("Gauss-Hermite computes Gaussian expectations via substitution") {
  // E[f(d)] for d ~ N(mean, std^2) = (1/sqrt(pi)) sum w_i f(mean + sqrt(2) std t_i).
  const double mean = 1.3;
  const double std_dev = 0.7;
  const GaussHermiteRule rule = gauss_hermite(32);
  auto expect = [&](auto&& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += rule.weights[i] * f(mean + std::sqrt(2.0) * std_dev * rule.nodes[i]);
    }
    return sum / kSqrtPi;
  };
  CHECK(expect([](double d) { return d; }) == doctest::Approx(mean).epsilon(1e-13));
  CHECK(expect([](double d) { return d * d; }) ==
        doctest::Approx(mean * mean + std_dev * std_dev).epsilon(1e-13));
  // E[cos d] = cos(mean) exp(-std^2/2), the characteristic-function identity.
  CHECK(expect([](double d) { return std::cos(d); }) ==
        doctest::Approx(std::cos(mean) * std::exp(-std_dev * std_dev / 2.0)).epsilon(1e-12));
}

TEST_CASE("Gauss-Hermite rejects out-of-range orders") {
  CHECK_THROWS_AS(gauss_hermite(0), DomainError);
  CHECK_THROWS_AS(gauss_hermite(-3), DomainError);
  CHECK_THROWS_AS(gauss_hermite(257), DomainError);
  CHECK_NOTHROW(gauss_hermite(256));
}

TEST_CASE("Simpson oracle sanity") {
  // The test-side integrators must themselves be trustworthy.
  CHECK(oracles::simpson([](double t) { return t * t; }, 0.0, 3.0, 64) ==
        doctest::Approx(9.0).epsilon(1e-12));
  CHECK(oracles::simpson2d([](double a, double b) { return a * b; }, 0.0, 2.0, 32, 0.0,
                           3.0, 32) == doctest::Approx(9.0).epsilon(1e-12));
}
