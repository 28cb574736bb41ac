#pragma once

#include "nwig/constants.hpp"

namespace nwig {

// Physical inputs of a field-traversal experiment, all in SI units: a neutron
// with mean wavenumber k0 and coherence length delta crosses a magnetic field
// of mean intensity B0 (Gaussian-fluctuating with standard deviation deltaB)
// confined to a region of length L.
struct ExperimentConfig {
  double field_mean_B0 = 0.0;        // tesla, >= 0
  double field_std_deltaB = 0.0;     // tesla, >= 0
  double region_length_L = 0.0;      // metres, > 0
  double mean_wavenumber_k0 = 0.0;   // 1/m, > 0
  double packet_spread_delta = 0.0;  // metres, > 0

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Throws DomainError on any violated bound.
void validate(const ExperimentConfig& cfg);

// Momentum kick acquired inside the field region.  Energy conservation with a
// Zeeman energy shift mu*B gives a change in mean wavenumber
//
//   dk = m * mu * B / (hbar^2 * k0).
//
// Returns dk in 1/m; the sign follows the sign of B.  Throws DomainError for
// non-finite or non-positive k0.
double momentum_shift(double field_B, double k0, const NeutronConstants& c = {});

// Spatial displacement accumulated over the field region of length L:
//
//   Delta = L * dk / k0.
//
// Returns metres.  Throws DomainError for non-positive L or k0.
double displacement(double field_B, double length_L, double k0,
                    const NeutronConstants& c = {});

// Separation of the two spin components after the field region, and the
// standard deviation of its fluctuation.
struct Separation {
  double delta0_m = 0.0;  // mean separation, metres
  double sigma_m = 0.0;   // std of the separation fluctuation, metres
};

// The two spin states acquire opposite displacements, so they end up separated
// by Delta0 = 2 * displacement(B0, L, k0).  Because the separation is linear in
// the field, sigma / Delta0 = deltaB / B0, hence sigma = Delta0 * deltaB / B0
// (zero field with zero fluctuation gives sigma = 0; zero field with a nonzero
// fluctuation leaves sigma undefined and throws DomainError).
Separation cat_separation(const ExperimentConfig& cfg, const NeutronConstants& c = {});

// Free flight time through a region of length L at mean wavenumber k0:
// t = m * L / (hbar * k0).  Throws DomainError for non-positive L or k0.
double time_of_flight(double length_L, double k0, const NeutronConstants& c = {});

// Natural spread of a free Gaussian packet after time t:
//
//   delta_t = sqrt(delta^2 + (hbar * t / (2 m delta))^2).
//
// Kept as a standalone diagnostic; the phase-space models in this library do
// not propagate it.  Throws DomainError for delta <= 0 or t < 0.
double free_spread(double delta, double time_t, const NeutronConstants& c = {});

}  // namespace nwig
