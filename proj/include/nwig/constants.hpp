#pragma once

namespace nwig {

// Neutron constants, CODATA 2018 recommended values:
//
//   mass                        m  = 1.67492749804e-27 kg
//   magnetic moment (magnitude) mu = 9.6623651e-27 J/T
//       (the neutron magnetic moment itself is negative, -mu; only the
//        magnitude enters the kinematics used here)
//   reduced Planck constant     hbar = 1.054571817e-34 J*s
//
// All three must be strictly positive.
struct NeutronConstants {
  double mass = 1.67492749804e-27;
  double magnetic_moment_magnitude = 9.6623651e-27;
  double hbar = 1.054571817e-34;
};

// Throws DomainError unless all constants are finite and strictly positive.
void validate(const NeutronConstants& c);

// Fixed nondimensionalization scales.  Lengths are expressed in units of
// 1e-10 m and wavenumbers in units of 1e10 1/m.  The product of the two unit
// factors is exactly 1.0 in double precision, so every phase k*x (and hence
// every cosine argument) is numerically identical in SI and internal units.
struct UnitScale {
  static constexpr double length_unit = 1e-10;     // metres per internal length
  static constexpr double wavenumber_unit = 1e10;  // (1/m) per internal wavenumber

  static constexpr double length_to_internal(double metres) { return metres / length_unit; }
  static constexpr double length_to_si(double internal) { return internal * length_unit; }
  static constexpr double wavenumber_to_internal(double per_metre) { return per_metre / wavenumber_unit; }
  static constexpr double wavenumber_to_si(double internal) { return internal * wavenumber_unit; }
};

static_assert(UnitScale::length_unit * UnitScale::wavenumber_unit == 1.0,
              "unit scales must multiply to exactly one so phases are invariant");

}  // namespace nwig
