#pragma once

#include <string>
#include <vector>

#include "nwig/grid.hpp"
#include "nwig/physics.hpp"
#include "nwig/states.hpp"
#include "nwig/transform.hpp"

namespace nwig {

// Phase-space trace integrals of a Wigner field:
//
//   trace    = Integral dx dk W(x, k)            (= Tr rho)
//   trace_sq = 2 pi Integral dx dk W(x, k)^2     (= Tr rho^2)
//
// For a pure normalized state both equal 1; mixing lowers trace_sq below
// trace^2.
struct Purity {
  double trace = 0.0;
  double trace_sq = 0.0;
};

// Trapezoid evaluation of both trace integrals over the field's grid, in
// ascending index order.  The grid must contain the state: if any grid-edge
// value exceeds 1e-10 of the field's peak magnitude, a SupportEscapeError
// names the offending edge (x_min/x_max/k_min/k_max).
Purity purity(const WignerField& field);

// Convenience: samples the evaluator on the grid, then reduces as above.
Purity purity(const PhaseSpaceEvaluator& w, const PhaseSpaceGrid& grid);

// Decoherence parameter of a separation-averaged superposition state:
//
//   epsilon = 1 - Tr(rho^2) / (Tr rho)^2,
//
// zero for a pure state and approaching one as the fluctuation destroys the
// interference.  epsilon is the raw quadrature value; use epsilon_clamped()
// for reporting.
struct DecoherenceResult {
  GaussianPacket packet;  // carries x0, k0, delta of the underlying packet
  FluctuationLaw law;     // separation mean delta0 and fluctuation sigma
  double epsilon = 0.0;       // raw 1 - purity_ratio
  double purity_ratio = 0.0;  // Tr rho^2 / (Tr rho)^2
  double total_N = 0.0;       // Tr rho, the post-selection weight

  double epsilon_clamped() const {
    return epsilon < 0.0 ? 0.0 : (epsilon > 1.0 ? 1.0 : epsilon);
  }
};

// Computes the decoherence parameter for the separation-averaged
// superposition of the given packet under the given fluctuation law, by
// trapezoid quadrature of the closed-form averaged Wigner function on its
// default grid at the given resolution (nx = nk = resolution).
//
// The raw epsilon must land in [-1e-8, 1 + 1e-8] (the analytic bound
// 0 < Tr rho^2 <= (Tr rho)^2 up to quadrature tolerance); a violation throws
// NumericsError, signalling an inadequate grid rather than bad input.
// Support escapes propagate as SupportEscapeError.
DecoherenceResult decoherence_parameter(const GaussianPacket& packet,
                                        const FluctuationLaw& law, int resolution = 512);

// One sweep cell that failed, with the diagnostic message of the exception
// that killed it.  The surface keeps NaN at that cell and continues.
struct CellFailure {
  int delta_index = 0;
  int sigma_index = 0;
  std::string message;
};

// epsilon(delta, sigma) tabulated over a parameter lattice at fixed k0 and
// mean separation delta0 (internal units).  Row-major: epsilon[i * nsigma + j]
// is the cell at delta_axis[i], sigma_axis[j].  Failed cells hold NaN and are
// listed in failures; a failure-free surface is finite everywhere.
struct SweepSurface {
  std::vector<double> delta_axis;
  std::vector<double> sigma_axis;
  std::vector<double> epsilon;  // row-major delta then sigma
  std::vector<int> cell_nx;     // per-cell grid size actually used (same layout)
  std::vector<int> cell_nk;
  double k0 = 0.0;
  double delta0 = 0.0;
  std::vector<CellFailure> failures;

  double at(int i, int j) const {
    return epsilon[static_cast<std::size_t>(i) * sigma_axis.size() + j];
  }
};

// Sweeps the decoherence parameter over packet spreads delta_axis (strictly
// increasing, within [0.05, 10]) and fluctuation widths sigma_axis (strictly
// increasing, within [0, 10]); every cell uses packet (x0 = 0, k0, delta_i)
// and law (delta0, sigma_j).  Per-cell quadrature grids are auto-sized so
// that the spatial step resolves the narrowest Gaussian factor (delta/4) and
// the wavenumber step resolves both the interference fringes (period
// 2 pi / delta0) and the fluctuation damping (scale 1/sigma), capped at
// 4096 nodes per axis.  A cell that throws is recorded in failures with its
// message, its epsilon set to NaN, and the sweep continues.
SweepSurface sweep(const std::vector<double>& delta_axis,
                   const std::vector<double>& sigma_axis, double k0, double delta0);

// Same sweep with k0 and delta0 derived from an experiment description
// (mean wavenumber and mean spin-component separation, converted to internal
// units).
SweepSurface sweep(const std::vector<double>& delta_axis,
                   const std::vector<double>& sigma_axis, const ExperimentConfig& experiment,
                   const NeutronConstants& constants = {});

// A point where the sigma-direction discrete slope of the surface changes
// sign: a local extremum of epsilon as a function of the noise strength.
enum class ExtremumKind { max, min };

struct Extremum {
  double delta = 0.0;
  double sigma = 0.0;
  ExtremumKind kind = ExtremumKind::max;
};

const char* to_string(ExtremumKind kind);

// Scans each delta-row of the surface along sigma and reports interior
// points where consecutive differences change sign and both exceed 1e-6 in
// magnitude (the noise floor that suppresses quadrature jitter).  Cells
// adjacent to a NaN are skipped.  A monotone surface yields an empty list.
std::vector<Extremum> find_extrema(const SweepSurface& surface);

}  // namespace nwig
