#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nwig/states.hpp"

namespace nwig {

// Uniform rectangular phase-space lattice: nx nodes on [x_min, x_max] and
// nk nodes on [k_min, k_max], endpoints included.  Internal units throughout.
struct PhaseSpaceGrid {
  double x_min = -1.0;
  double x_max = 1.0;
  double k_min = -1.0;
  double k_max = 1.0;
  int nx = 512;
  int nk = 512;

  double hx() const { return (x_max - x_min) / (nx - 1); }
  double hk() const { return (k_max - k_min) / (nk - 1); }
  double x(int i) const { return x_min + i * hx(); }
  double k(int j) const { return k_min + j * hk(); }
};

// Throws DomainError unless bounds are finite and ordered and both counts
// are at least 8.
void validate(const PhaseSpaceGrid& g);

// Record of how a field was produced.  kind is one of
//   "analytic"          – closed-form evaluator sampled on the grid
//   "numeric_transform" – quadrature transform of a sampled wavefunction
//   "density_transform" – quadrature transform of a density kernel
//   "shift_average"     – Gauss–Hermite average of an evaluator
//   "monte_carlo"       – seeded Monte Carlo average (seed/samples set)
//   "loaded"            – deserialized from a file
struct Provenance {
  std::string kind;
  std::string state;  // tag or free-form description of the source state
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::string detail;  // free-form notes (quadrature order, source path, ...)
};

// Wigner values sampled on a grid, row-major in x then k:
// values[i * nk + j] = W(x_i, k_j).
struct WignerField {
  PhaseSpaceGrid grid;
  std::vector<double> values;
  Provenance provenance;

  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.nk + j]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.nk + j]; }
};

// Throws DomainError unless the grid is valid, the value array has exactly
// nx*nk finite entries, and the provenance kind is non-empty.
void validate(const WignerField& f);

// Default grid for a state: x in x0 +/- (8 delta' + |delta0|) with
// delta' = sqrt(delta^2 + sigma^2), and k in k0 +/- 8 delta_k.  This covers
// every Gaussian factor of all four closed forms to below 1e-14 of its peak.
// The default counts are odd (513) so that the packet center (x0, k0) is
// itself a lattice node and the emitted peak row sits exactly on the
// closed-form maximum; explicitly requested counts are used as given.
PhaseSpaceGrid default_grid(const StateKind& s, int nx = 513, int nk = 513);

}  // namespace nwig
