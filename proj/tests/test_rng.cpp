#include <array>
#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "nwig/errors.hpp"
#include "nwig/rng.hpp"

using namespace nwig;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  // Reference vectors from the Random123 library's known-answer tests
  // (Salmon et al., SC'11): zero input, saturated input, and pi-digit input.
  {
    const auto out = philox4x32_10({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  {
    const auto out = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                   {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
  {
    const auto out = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                   {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
}

TEST_CASE("inverse normal CDF matches published quantiles") {
  // Standard-normal quantiles as published in statistical references,
  // accurate to the last digit shown.
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(inverse_normal_cdf(0.75) == doctest::Approx(0.6744897501960817).epsilon(1e-13));
  CHECK(inverse_normal_cdf(0.3) == doctest::Approx(-0.5244005127080409).epsilon(1e-13));
  CHECK(inverse_normal_cdf(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-13));
  CHECK(inverse_normal_cdf(1e-9) == doctest::Approx(-5.9978070150076865).epsilon(1e-12));

  // Antisymmetry about the median.
  for (double p : {0.631, 0.0004, 0.25, 0.9991}) {
    CHECK(inverse_normal_cdf(p) ==
          doctest::Approx(-inverse_normal_cdf(1.0 - p)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(inverse_normal_cdf(0.0), DomainError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), DomainError);
  CHECK_THROWS_AS(inverse_normal_cdf(-0.1), DomainError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.1), DomainError);
}

TEST_CASE("counter stream implements its documented mapping") {
  // uniform01(i) must equal the documented function of the public Philox
  // block: counter = (lo32(i), hi32(i), 0, 0), key = (lo32(seed), hi32(seed)),
  // bits = out[0]:out[1], value = ((bits >> 11) + 0.5) * 2^-53.
  const std::uint64_t seed = 0x0123456789abcdefULL;
  const CounterRng rng(seed);
  for (std::uint64_t index : {0ULL, 1ULL, 12345ULL, 0xffffffffULL, 0x1'0000'0001ULL}) {
    const std::array<std::uint32_t, 4> counter = {static_cast<std::uint32_t>(index),
                                                  static_cast<std::uint32_t>(index >> 32), 0u,
                                                  0u};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto block = philox4x32_10(counter, key);
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(block[0]) << 32) | static_cast<std::uint64_t>(block[1]);
    const double expected = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    CHECK(rng.uniform01(index) == expected);
    CHECK(rng.normal(index) == inverse_normal_cdf(expected));
  }
}

TEST_CASE("counter stream regression values stay frozen") {
  // First uniforms for seed 7; any change here breaks every stored
  // Monte Carlo artifact, so it must be deliberate.
  const CounterRng rng(7);
  CHECK(rng.uniform01(0) == doctest::Approx(0.9545971261687001).epsilon(1e-15));
  CHECK(rng.uniform01(1) == doctest::Approx(0.40696040443034937).epsilon(1e-15));
  CHECK(rng.uniform01(2) == doctest::Approx(0.006075128914893868).epsilon(1e-15));
  CHECK(rng.uniform01(3) == doctest::Approx(0.3901990703889468).epsilon(1e-15));
}

TEST_CASE("counter stream is deterministic and seed-sensitive") {
  const CounterRng a(42);
  const CounterRng b(42);
  const CounterRng c(43);
  int collisions = 0;
  for (std::uint64_t i = 0; i < 64; ++i) {
    CHECK(a.uniform01(i) == b.uniform01(i));
    if (a.uniform01(i) == c.uniform01(i)) ++collisions;
  }
  CHECK(collisions == 0);
}

TEST_CASE("counter stream has sound first and second moments") {
  // Loose CLT bounds: n = 20000 uniforms have mean 0.5 +- ~0.006 (3 sigma)
  // and the mapped normals have mean ~0 and variance ~1.
  const CounterRng rng(12345);
  const int n = 20000;
  double sum_u = 0.0;
  double sum_n = 0.0;
  double sum_n2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01(i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum_u += u;
    const double z = rng.normal(i);
    sum_n += z;
    sum_n2 += z * z;
  }
  CHECK(sum_u / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(sum_n / n == doctest::Approx(0.0).scale(1.0).epsilon(0.03));
  CHECK(sum_n2 / n == doctest::Approx(1.0).epsilon(0.05));
}
