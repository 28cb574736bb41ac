#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "nwig/grid.hpp"
#include "nwig/quadrature.hpp"
#include "nwig/states.hpp"

namespace nwig {

// Wavefunction sampled on a uniform position lattice x_j = x_start + j*step.
// Requires step > 0, at least 16 samples, and square-normalization within
// norm_tolerance (trapezoid of |psi|^2 within that distance of 1).
class SampledWavefunction {
 public:
  SampledWavefunction(double x_start, double step,
                      std::vector<std::complex<double>> amplitudes,
                      double norm_tolerance = 1e-6);

  double x_start() const { return x_start_; }
  double step() const { return step_; }
  double x_end() const { return x_start_ + step_ * (amplitudes_.size() - 1); }
  const std::vector<std::complex<double>>& amplitudes() const { return amplitudes_; }

 private:
  double x_start_;
  double step_;
  std::vector<std::complex<double>> amplitudes_;
};

// Samples a position-space amplitude on [x_lo, x_hi] with count nodes.
SampledWavefunction sample_wavefunction(const std::function<std::complex<double>(double)>& psi,
                                        double x_lo, double x_hi, int count,
                                        double norm_tolerance = 1e-6);

// Two-point density kernel rho(a, b) = <a| rho |b> with a declared support
// box [x_lo, x_hi] (the kernel must decay below 1e-16 of its peak before
// either argument leaves the box) and a declared bound k_content on its
// internal phase frequency (used to choose a safe quadrature step for the
// oscillatory transform integral).  Hermiticity rho(a,b) = conj(rho(b,a)) is
// spot-checked at construction on a deterministic lattice of pairs (1e-12
// absolute) and is assumed thereafter.
class DensityKernel {
 public:
  using Evaluator = std::function<std::complex<double>(double, double)>;

  DensityKernel(Evaluator evaluate, double x_lo, double x_hi, double k_content);

  std::complex<double> operator()(double a, double b) const { return evaluate_(a, b); }
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double k_content() const { return k_content_; }

 private:
  Evaluator evaluate_;
  double x_lo_;
  double x_hi_;
  double k_content_;
};

// Kernel of the pure state |psi><psi|: rho(a, b) = psi(a) * conj(psi(b)).
DensityKernel pure_state_kernel(const std::function<std::complex<double>(double)>& psi,
                                double x_lo, double x_hi, double k_content);

// Kernel of the shift-averaged mixed state
//   rho = Integral dDelta w(Delta) |psi_Delta><psi_Delta|
// computed by Gauss-Hermite quadrature over the Gaussian law (order nodes).
// psi_family(Delta, x) evaluates the pure-state amplitude at displacement
// parameter Delta.
DensityKernel shift_averaged_kernel(
    const std::function<std::complex<double>(double, double)>& psi_family,
    const FluctuationLaw& law, int order, double x_lo, double x_hi, double k_content);

// A real-valued phase-space function W(x, k).
using PhaseSpaceEvaluator = std::function<double(double, double)>;

// A phase-space function additionally parameterized by the random
// displacement: (Delta, x, k) -> W_Delta(x, k).
using ShiftFamilyEvaluator = std::function<double(double, double, double)>;

// Samples an evaluator on a grid (rows in parallel, deterministically).
WignerField evaluate_on_grid(const PhaseSpaceEvaluator& w, const PhaseSpaceGrid& grid,
                             Provenance provenance);

// Numeric Wigner transform of a sampled wavefunction:
//
//   W(x, k) = (1/2pi) Integral dxi exp(-i k xi) psi(x + xi/2) conj(psi(x - xi/2))
//
// by trapezoid quadrature over the xi-window where the integrand modulus
// exceeds 1e-16 of its per-x peak, with the xi-step chosen so that the
// fastest phase (grid |k| plus the wavefunction's own estimated wavenumber
// content) rotates at most pi/4 per step.  Off-lattice psi values come from
// four-point cubic interpolation.  The wavefunction must be negligible
// (|psi| < 1e-10 of peak) over the outermost four samples at both ends;
// otherwise a SupportEscapeError reports the measured boundary magnitude.
WignerField wigner_transform(const SampledWavefunction& psi, const PhaseSpaceGrid& grid);

// Same transform with the pure-state product replaced by a density kernel:
//
//   W(x, k) = (1/2pi) Integral dxi exp(-i k xi) rho(x + xi/2, x - xi/2).
//
// Throws SupportEscapeError if the kernel has not decayed below 1e-16 of its
// per-x peak at the edge of the declared window.
WignerField wigner_from_density(const DensityKernel& rho, const PhaseSpaceGrid& grid);

// Average of a displacement-parameterized family over the Gaussian law, as a
// new evaluator:
//
//   W_avg(x, k) = Integral dDelta w(Delta) family(Delta, x, k)
//
// by Gauss-Hermite quadrature at nodes Delta_i = delta0 + sqrt(2)*sigma*t_i
// (order in [4, 256]); sigma = 0 short-circuits to family(delta0, x, k).
PhaseSpaceEvaluator average_over_shift(const ShiftFamilyEvaluator& family,
                                       const FluctuationLaw& law, int order = 64);

// Rigid-shift special case: the displacement enters as a translation of the
// base evaluator, W_avg(x, k) = Integral dDelta w(Delta) base(x - Delta, k).
// This is the displacement average of a fixed state; the family overload
// covers states whose internal structure depends on Delta (such as the cat's
// separation).
PhaseSpaceEvaluator average_over_shift(const PhaseSpaceEvaluator& base,
                                       const FluctuationLaw& law, int order = 64);

// Monte Carlo estimate of the same average: draws Delta_i ~ N(delta0,
// sigma^2) for sample indices [first_sample_index, first_sample_index +
// samples) from the seeded counter RNG and averages family(Delta_i, x, k)
// per node in ascending index order.  Requires samples >= 100.  Identical
// (seed, first_sample_index, samples) inputs give a bit-identical field;
// seed and sample count are recorded in the provenance.
WignerField monte_carlo_average(const ShiftFamilyEvaluator& family, const FluctuationLaw& law,
                                const PhaseSpaceGrid& grid, std::uint64_t samples,
                                std::uint64_t seed, std::uint64_t first_sample_index = 0);

// Rigid-shift Monte Carlo average of a fixed evaluator.
WignerField monte_carlo_average(const PhaseSpaceEvaluator& base, const FluctuationLaw& law,
                                const PhaseSpaceGrid& grid, std::uint64_t samples,
                                std::uint64_t seed);

// Monte Carlo average plus the per-node standard error of the mean
// (sample standard deviation / sqrt(samples)), for z-score comparisons
// against closed forms.
struct MonteCarloStats {
  WignerField mean;
  std::vector<double> standard_error;  // same layout as mean.values
};
MonteCarloStats monte_carlo_average_with_error(const ShiftFamilyEvaluator& family,
                                               const FluctuationLaw& law,
                                               const PhaseSpaceGrid& grid,
                                               std::uint64_t samples, std::uint64_t seed,
                                               std::uint64_t first_sample_index = 0);

// Trapezoid reductions of a field: total integral, the two marginals (on the
// grid axes), and normalized first/second moments computed from the
// marginals.  All sums run in ascending index order.
struct ReduceResult {
  double total = 0.0;
  std::vector<double> marginal_x;  // P(x_i), length nx
  std::vector<double> marginal_k;  // P(k_j), length nk
  double mean_x = 0.0;
  double var_x = 0.0;
  double mean_k = 0.0;
  double var_k = 0.0;
};
ReduceResult reduce(const WignerField& field);

}  // namespace nwig
