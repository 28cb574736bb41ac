#include "nwig/physics.hpp"

#include <cmath>
#include <string>

#include "nwig/errors.hpp"

namespace nwig {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const NeutronConstants& c) {
  require(finite(c.mass) && c.mass > 0.0, "neutron mass must be finite and positive");
  require(finite(c.magnetic_moment_magnitude) && c.magnetic_moment_magnitude > 0.0,
          "magnetic moment magnitude must be finite and positive");
  require(finite(c.hbar) && c.hbar > 0.0, "hbar must be finite and positive");
}

void validate(const ExperimentConfig& cfg) {
  require(finite(cfg.field_mean_B0) && cfg.field_mean_B0 >= 0.0,
          "field_mean_B0 must be finite and >= 0");
  require(finite(cfg.field_std_deltaB) && cfg.field_std_deltaB >= 0.0,
          "field_std_deltaB must be finite and >= 0");
  require(finite(cfg.region_length_L) && cfg.region_length_L > 0.0,
          "region_length_L must be finite and positive");
  require(finite(cfg.mean_wavenumber_k0) && cfg.mean_wavenumber_k0 > 0.0,
          "mean_wavenumber_k0 must be finite and positive");
  require(finite(cfg.packet_spread_delta) && cfg.packet_spread_delta > 0.0,
          "packet_spread_delta must be finite and positive");
}

double momentum_shift(double field_B, double k0, const NeutronConstants& c) {
  validate(c);
  require(finite(field_B), "field intensity must be finite");
  require(finite(k0) && k0 > 0.0, "k0 must be finite and positive");
  return c.mass * c.magnetic_moment_magnitude * field_B / (c.hbar * c.hbar * k0);
}

double displacement(double field_B, double length_L, double k0, const NeutronConstants& c) {
  require(finite(length_L) && length_L > 0.0, "region length must be finite and positive");
  return length_L * momentum_shift(field_B, k0, c) / k0;
}

Separation cat_separation(const ExperimentConfig& cfg, const NeutronConstants& c) {
  validate(cfg);
  // The two spin components are kicked in opposite directions, hence the
  // factor 2 relative to the single-packet displacement.
  Separation out;
  out.delta0_m = 2.0 * displacement(cfg.field_mean_B0, cfg.region_length_L,
                                    cfg.mean_wavenumber_k0, c);
  if (cfg.field_mean_B0 > 0.0) {
    out.sigma_m = out.delta0_m * (cfg.field_std_deltaB / cfg.field_mean_B0);
  } else if (cfg.field_std_deltaB > 0.0) {
    throw DomainError("field_std_deltaB > 0 with field_mean_B0 = 0: the ratio "
                      "sigma/Delta0 = deltaB/B0 is undefined");
  } else {
    out.sigma_m = 0.0;
  }
  return out;
}

double time_of_flight(double length_L, double k0, const NeutronConstants& c) {
  validate(c);
  require(finite(length_L) && length_L > 0.0, "region length must be finite and positive");
  require(finite(k0) && k0 > 0.0, "k0 must be finite and positive");
  return c.mass * length_L / (c.hbar * k0);
}

double free_spread(double delta, double time_t, const NeutronConstants& c) {
  validate(c);
  require(finite(delta) && delta > 0.0, "packet spread delta must be finite and positive");
  require(finite(time_t) && time_t >= 0.0, "time must be finite and >= 0");
  const double drift = c.hbar * time_t / (2.0 * c.mass * delta);
  return std::hypot(delta, drift);
}

}  // namespace nwig
