#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "nwig/decoherence.hpp"
#include "nwig/errors.hpp"
#include "nwig/grid.hpp"
#include "nwig/states.hpp"
#include "oracles.hpp"

using namespace nwig;

namespace {

PhaseSpaceEvaluator evaluator_for(const StateKind& state) {
  return [state](double x, double k) { return wigner(x, k, state); };
}

// Reference parameters for the averaged superposition used throughout:
// packet spread 1.1, mean wavenumber 1.7, mean separation 16.1.
const GaussianPacket kPacket{0.0, 1.7, 1.1};
const double kSeparation = 16.1;

}  // namespace

TEST_CASE("trace integrals recover purity of closed-form states") {
  const GaussianPacket p{0.5, 1.7, 1.0};

  // Pure packet: Tr rho = Tr rho^2 = 1.
  const StateKind pure = StateKind::gaussian(p);
  const Purity pure_purity = purity(evaluator_for(pure), default_grid(pure, 513, 513));
  CHECK(pure_purity.trace == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pure_purity.trace_sq == doctest::Approx(1.0).epsilon(1e-9));

  // Rigid-shift mixture: Tr rho = 1, Tr rho^2 = delta / delta'.  With
  // sigma = delta the ratio is exactly 1/sqrt(2).
  const FluctuationLaw law{0.4, p.delta};
  const StateKind mixed = StateKind::squashed(p, law);
  const Purity mixed_purity = purity(evaluator_for(mixed), default_grid(mixed, 513, 513));
  CHECK(mixed_purity.trace == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mixed_purity.trace_sq == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

  // Averaged superposition: both traces against the independent closed-form
  // quadrature oracles.
  const FluctuationLaw cat_law{kSeparation, 1.0};
  const StateKind averaged = StateKind::cat_averaged(kPacket, cat_law);
  const Purity cat_purity =
      purity(evaluator_for(averaged), default_grid(averaged, 1024, 1024));
  CHECK(cat_purity.trace ==
        doctest::Approx(oracles::norm_cat_averaged_closed(kPacket.delta, kPacket.k0,
                                                          kSeparation, cat_law.sigma))
            .epsilon(1e-8));
  CHECK(cat_purity.trace_sq ==
        doctest::Approx(oracles::purity_cat_averaged_closed(kPacket.delta, kPacket.k0,
                                                            kSeparation, cat_law.sigma))
            .epsilon(1e-8));
}

TEST_CASE("trace integrals reject grids that clip the state") {
  const GaussianPacket p{0.0, 1.7, 1.0};
  const StateKind state = StateKind::gaussian(p);
  PhaseSpaceGrid grid = default_grid(state, 129, 129);
  grid.x_min = p.x0 - 2.0 * p.delta;  // edge value ~ e^-2 of the peak
  grid.x_max = p.x0 + 2.0 * p.delta;
  CHECK_THROWS_AS(purity(evaluator_for(state), grid), SupportEscapeError);
  try {
    purity(evaluator_for(state), grid);
  } catch (const SupportEscapeError& error) {
    CHECK(std::string(error.what()).find("grid edge") != std::string::npos);
  }
}

TEST_CASE("decoherence parameter vanishes without fluctuation") {
  const DecoherenceResult result =
      decoherence_parameter(kPacket, FluctuationLaw{kSeparation, 0.0});
  CHECK(std::abs(result.epsilon) < 1e-8);
  CHECK(result.epsilon_clamped() >= 0.0);
  CHECK(result.total_N ==
        doctest::Approx(norm_cat_averaged(kPacket, FluctuationLaw{kSeparation, 0.0}))
            .epsilon(1e-10));
}

TEST_CASE("decoherence parameter matches the closed-form oracle") {
  for (double sigma : {0.5, 1.0, 2.0}) {
    const DecoherenceResult result =
        decoherence_parameter(kPacket, FluctuationLaw{kSeparation, sigma});
    const double expected =
        oracles::epsilon_closed(kPacket.delta, kPacket.k0, kSeparation, sigma);
    CHECK(result.epsilon == doctest::Approx(expected).epsilon(1e-7));
    CHECK(result.total_N ==
          doctest::Approx(oracles::norm_cat_averaged_closed(kPacket.delta, kPacket.k0,
                                                            kSeparation, sigma))
              .epsilon(1e-8));
    CHECK(result.purity_ratio == doctest::Approx(1.0 - result.epsilon).epsilon(1e-12));
  }
}

TEST_CASE("decoherence parameter regression values hold") {
  // Frozen outputs of this implementation at the default resolution; the
  // closed-form oracle above guards correctness, these guard drift.
  CHECK(decoherence_parameter(kPacket, {kSeparation, 0.5}).epsilon ==
        doctest::Approx(0.26715053652378573).epsilon(1e-10));
  CHECK(decoherence_parameter(kPacket, {kSeparation, 1.0}).epsilon ==
        doctest::Approx(0.5033221705110413).epsilon(1e-10));
  CHECK(decoherence_parameter(kPacket, {kSeparation, 2.0}).epsilon ==
        doctest::Approx(0.629370149275033).epsilon(1e-10));
  CHECK(decoherence_parameter(GaussianPacket{0.0, 1.7, 4.0}, {kSeparation, 1.5}).epsilon ==
        doctest::Approx(0.501514789521).epsilon(1e-9));
  CHECK(decoherence_parameter(GaussianPacket{0.0, 1.7, 2.0}, {kSeparation, 0.3}).epsilon ==
        doctest::Approx(0.116494023494).epsilon(1e-9));
}

TEST_CASE("decoherence parameter is grid-converged at the default resolution") {
  const FluctuationLaw law{kSeparation, 1.0};
  const double coarse = decoherence_parameter(kPacket, law, 256).epsilon;
  const double fine = decoherence_parameter(kPacket, law, 512).epsilon;
  CHECK(std::abs(coarse - fine) < 1e-5);
  CHECK_THROWS_AS(decoherence_parameter(kPacket, law, 7), DomainError);
}

TEST_CASE("epsilon clamping trims quadrature jitter to [0, 1]") {
  DecoherenceResult r;
  r.epsilon = -3e-15;
  CHECK(r.epsilon_clamped() == 0.0);
  r.epsilon = 1.0 + 1e-12;
  CHECK(r.epsilon_clamped() == 1.0);
  r.epsilon = 0.42;
  CHECK(r.epsilon_clamped() == 0.42);
}

TEST_CASE("sweep tabulates the same values as the single-point evaluator") {
  const std::vector<double> delta_axis = {1.1, 4.0};
  const std::vector<double> sigma_axis = {0.5, 1.0, 1.5};
  const SweepSurface surface = sweep(delta_axis, sigma_axis, kPacket.k0, kSeparation);

  REQUIRE(surface.epsilon.size() == 6);
  REQUIRE(surface.cell_nx.size() == 6);
  CHECK(surface.failures.empty());
  CHECK(surface.k0 == kPacket.k0);
  CHECK(surface.delta0 == kSeparation);

  for (std::size_t i = 0; i < delta_axis.size(); ++i) {
    for (std::size_t j = 0; j < sigma_axis.size(); ++j) {
      const std::size_t cell = i * sigma_axis.size() + j;
      const GaussianPacket packet{0.0, kPacket.k0, delta_axis[i]};
      const FluctuationLaw law{kSeparation, sigma_axis[j]};
      const int resolution = std::max(surface.cell_nx[cell], surface.cell_nk[cell]);
      const double direct = decoherence_parameter(packet, law, resolution).epsilon;
      CHECK(surface.at(static_cast<int>(i), static_cast<int>(j)) ==
            doctest::Approx(direct).epsilon(1e-12));
      CHECK(surface.at(static_cast<int>(i), static_cast<int>(j)) ==
            doctest::Approx(oracles::epsilon_closed(delta_axis[i], kPacket.k0, kSeparation,
                                                    sigma_axis[j]))
                .epsilon(1e-6));
    }
  }
}

TEST_CASE("sweep validates its axes and fixed parameters") {
  const std::vector<double> good_delta = {1.0, 2.0};
  const std::vector<double> good_sigma = {0.0, 1.0};
  CHECK_THROWS_AS(sweep({}, good_sigma, 1.7, 16.1), DomainError);
  CHECK_THROWS_AS(sweep({0.04, 1.0}, good_sigma, 1.7, 16.1), DomainError);   // below range
  CHECK_THROWS_AS(sweep({1.0, 11.0}, good_sigma, 1.7, 16.1), DomainError);   // above range
  CHECK_THROWS_AS(sweep({2.0, 1.0}, good_sigma, 1.7, 16.1), DomainError);    // not increasing
  CHECK_THROWS_AS(sweep({1.0, 1.0}, good_sigma, 1.7, 16.1), DomainError);    // repeated
  CHECK_THROWS_AS(sweep(good_delta, {-0.1, 1.0}, 1.7, 16.1), DomainError);   // sigma < 0
  CHECK_THROWS_AS(sweep(good_delta, {0.0, 10.5}, 1.7, 16.1), DomainError);   // sigma > 10
  CHECK_THROWS_AS(sweep(good_delta, good_sigma,
                        std::numeric_limits<double>::quiet_NaN(), 16.1),
                  DomainError);
  CHECK_THROWS_AS(sweep(good_delta, good_sigma, 1.7,
                        std::numeric_limits<double>::infinity()),
                  DomainError);
}

TEST_CASE("extremum scan finds interior sign changes and nothing else") {
  SweepSurface surface;
  surface.delta_axis = {1.0, 2.0, 3.0};
  surface.sigma_axis = {0.0, 1.0, 2.0, 3.0, 4.0};
  surface.epsilon = {
      0.00, 0.20, 0.50, 0.30, 0.10,  // interior maximum at sigma = 2
      0.50, 0.30, 0.10, 0.20, 0.40,  // interior minimum at sigma = 2
      0.10, 0.20, 0.30, 0.40, 0.50,  // monotone: no extremum
  };
  surface.cell_nx.assign(15, 512);
  surface.cell_nk.assign(15, 512);

  const std::vector<Extremum> extrema = find_extrema(surface);
  REQUIRE(extrema.size() == 2);
  CHECK(extrema[0].delta == 1.0);
  CHECK(extrema[0].sigma == 2.0);
  CHECK(extrema[0].kind == ExtremumKind::max);
  CHECK(extrema[1].delta == 2.0);
  CHECK(extrema[1].sigma == 2.0);
  CHECK(extrema[1].kind == ExtremumKind::min);
  CHECK(std::string(to_string(ExtremumKind::max)) == "max");
  CHECK(std::string(to_string(ExtremumKind::min)) == "min");
}

TEST_CASE("extremum scan ignores noise-floor wiggles and NaN neighbours") {
  SweepSurface surface;
  surface.delta_axis = {1.0};
  surface.sigma_axis = {0.0, 1.0, 2.0, 3.0, 4.0};

  // A bump of 5e-7 sits below the 1e-6 slope floor.
  surface.epsilon = {0.10, 0.20, 0.20 + 5e-7, 0.20, 0.10};
  CHECK(find_extrema(surface).empty());

  // Flat surface: no extrema at all.
  surface.epsilon.assign(5, 0.25);
  CHECK(find_extrema(surface).empty());

  // Cells adjacent to a failed (NaN) cell are skipped.
  surface.epsilon = {0.10, 0.50, std::numeric_limits<double>::quiet_NaN(), 0.50, 0.10};
  CHECK(find_extrema(surface).empty());
}
