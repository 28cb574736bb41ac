#include "nwig/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nwig/detail/math_util.hpp"
#include "nwig/detail/parallel.hpp"
#include "nwig/errors.hpp"
#include "nwig/rng.hpp"

namespace nwig {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

// Integrand values below this fraction of the per-point peak are treated as
// zero when windowing the transform integral.
constexpr double kWindowFloor = 1e-16;

// Boundary amplitudes above this fraction of the peak mean the state is not
// contained in the sampled range.
constexpr double kSupportFloor = 1e-10;

}  // namespace

SampledWavefunction::SampledWavefunction(double x_start, double step,
                                         std::vector<std::complex<double>> amplitudes,
                                         double norm_tolerance)
    : x_start_(x_start), step_(step), amplitudes_(std::move(amplitudes)) {
  if (!std::isfinite(x_start_) || !std::isfinite(step_) || step_ <= 0.0) {
    throw DomainError("sampled wavefunction requires finite x_start and step > 0");
  }
  if (amplitudes_.size() < 16) {
    throw DomainError("sampled wavefunction requires at least 16 samples");
  }
  std::vector<double> density(amplitudes_.size());
  for (std::size_t j = 0; j < amplitudes_.size(); ++j) density[j] = std::norm(amplitudes_[j]);
  const double total = trapezoid(density, step_);
  if (std::abs(total - 1.0) > norm_tolerance) {
    throw DomainError("sampled wavefunction is not normalized: integral of |psi|^2 = " +
                      std::to_string(total));
  }
}

SampledWavefunction sample_wavefunction(const std::function<std::complex<double>(double)>& psi,
                                        double x_lo, double x_hi, int count,
                                        double norm_tolerance) {
  if (!(x_hi > x_lo)) throw DomainError("sampling range requires x_hi > x_lo");
  if (count < 16) throw DomainError("sampling requires at least 16 nodes");
  const double step = (x_hi - x_lo) / (count - 1);
  std::vector<std::complex<double>> amplitudes(count);
  for (int j = 0; j < count; ++j) amplitudes[j] = psi(x_lo + j * step);
  return SampledWavefunction(x_lo, step, std::move(amplitudes), norm_tolerance);
}

DensityKernel::DensityKernel(Evaluator evaluate, double x_lo, double x_hi, double k_content)
    : evaluate_(std::move(evaluate)), x_lo_(x_lo), x_hi_(x_hi), k_content_(k_content) {
  if (!evaluate_) throw DomainError("density kernel requires an evaluator");
  if (!(x_hi_ > x_lo_)) throw DomainError("density kernel requires x_hi > x_lo");
  if (!(k_content_ >= 0.0) || !std::isfinite(k_content_)) {
    throw DomainError("density kernel k_content must be finite and >= 0");
  }
  // Hermiticity spot check on a deterministic 5x5 lattice of argument pairs.
  const int probes = 5;
  const double span = x_hi_ - x_lo_;
  for (int ia = 0; ia < probes; ++ia) {
    for (int ib = 0; ib < probes; ++ib) {
      const double a = x_lo_ + span * (ia + 0.5) / probes;
      const double b = x_lo_ + span * (ib + 0.5) / probes;
      const std::complex<double> forward = evaluate_(a, b);
      const std::complex<double> backward = std::conj(evaluate_(b, a));
      if (std::abs(forward - backward) > 1e-12) {
        throw DomainError("density kernel is not Hermitian at sampled pair");
      }
    }
  }
}

DensityKernel pure_state_kernel(const std::function<std::complex<double>(double)>& psi,
                                double x_lo, double x_hi, double k_content) {
  return DensityKernel(
      [psi](double a, double b) { return psi(a) * std::conj(psi(b)); }, x_lo, x_hi,
      k_content);
}

DensityKernel shift_averaged_kernel(
    const std::function<std::complex<double>(double, double)>& psi_family,
    const FluctuationLaw& law, int order, double x_lo, double x_hi, double k_content) {
  validate(law);
  if (order < 4 || order > 256) throw DomainError("quadrature order must be in [4, 256]");

  if (law.sigma == 0.0) {
    const double shift = law.delta0;
    return DensityKernel(
        [psi_family, shift](double a, double b) {
          return psi_family(shift, a) * std::conj(psi_family(shift, b));
        },
        x_lo, x_hi, k_content);
  }

  const GaussHermiteRule rule = gauss_hermite(order);
  std::vector<double> shifts(rule.nodes.size());
  std::vector<double> weights(rule.nodes.size());
  const double scale = std::sqrt(2.0) * law.sigma;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    shifts[i] = law.delta0 + scale * rule.nodes[i];
    weights[i] = rule.weights[i] / kSqrtPi;
  }
  return DensityKernel(
      [psi_family, shifts, weights](double a, double b) {
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < shifts.size(); ++i) {
          sum += weights[i] * psi_family(shifts[i], a) * std::conj(psi_family(shifts[i], b));
        }
        return sum;
      },
      x_lo, x_hi, k_content);
}

WignerField evaluate_on_grid(const PhaseSpaceEvaluator& w, const PhaseSpaceGrid& grid,
                             Provenance provenance) {
  validate(grid);
  WignerField field;
  field.grid = grid;
  field.values.assign(static_cast<std::size_t>(grid.nx) * grid.nk, 0.0);
  field.provenance = std::move(provenance);
  detail::parallel_for_rows(grid.nx, [&](int i) {
    const double x = grid.x(i);
    double* row = field.values.data() + static_cast<std::size_t>(i) * grid.nk;
    for (int j = 0; j < grid.nk; ++j) row[j] = w(x, grid.k(j));
  });
  return field;
}

namespace {

// Shared core of the two transform operations: integrates
// (1/2pi) Integral dxi exp(-i*k*xi) f(xi) over the symmetric window
// [-xi_half, xi_half] by trapezoid on the half-axis, using the Hermitian
// symmetry f(-xi) = conj(f(xi)).  integrand[j] = f(j * step_xi), and
// integrand[0] must be real up to rounding.
void fill_row_from_half_integrand(const std::vector<std::complex<double>>& integrand,
                                  double step_xi, const PhaseSpaceGrid& grid, double* row) {
  const std::size_t count = integrand.size();
  if (count < 2) {
    for (int j = 0; j < grid.nk; ++j) row[j] = 0.0;
    return;
  }
  const double f0 = integrand[0].real();
  for (int j = 0; j < grid.nk; ++j) {
    const double k = grid.k(j);
    const std::complex<double> rotation = std::polar(1.0, -k * step_xi);
    std::complex<double> phase = rotation;
    double accum = f0;
    double last = 0.0;
    for (std::size_t m = 1; m < count; ++m) {
      last = (integrand[m] * phase).real();
      accum += 2.0 * last;
      phase *= rotation;
    }
    // Trapezoid endpoint weight: the outermost sample counts once, not twice.
    row[j] = (accum - last) * step_xi / (2.0 * kPi);
  }
}

}  // namespace

WignerField wigner_transform(const SampledWavefunction& psi, const PhaseSpaceGrid& grid) {
  validate(grid);
  const auto& amp = psi.amplitudes();
  const int n = static_cast<int>(amp.size());
  const double h = psi.step();
  const double x_start = psi.x_start();
  const double x_end = psi.x_end();

  // Modulus envelope and peak.
  std::vector<double> modulus(n);
  double peak = 0.0;
  for (int j = 0; j < n; ++j) {
    modulus[j] = std::abs(amp[j]);
    peak = std::max(peak, modulus[j]);
  }
  if (peak == 0.0) throw DomainError("wavefunction samples are all zero");

  // Containment precondition: the outermost four samples on each side must be
  // negligible, otherwise the xi-integral misses support.
  for (int j = 0; j < 4; ++j) {
    if (modulus[j] > kSupportFloor * peak) {
      throw SupportEscapeError("sampled x_lo", modulus[j], peak);
    }
    if (modulus[n - 1 - j] > kSupportFloor * peak) {
      throw SupportEscapeError("sampled x_hi", modulus[n - 1 - j], peak);
    }
  }

  // Wavenumber content of the samples: mean from the probability-weighted
  // phase gradient, spread from the first-derivative norm (central
  // differences).  Used only to pick a safe oscillation-resolving xi-step.
  double prob = 0.0;
  double mean_k_acc = 0.0;
  double sq_k_acc = 0.0;
  for (int j = 1; j + 1 < n; ++j) {
    const std::complex<double> derivative = (amp[j + 1] - amp[j - 1]) / (2.0 * h);
    prob += std::norm(amp[j]) * h;
    mean_k_acc += (std::conj(amp[j]) * derivative).imag() * h;
    sq_k_acc += std::norm(derivative) * h;
  }
  const double mean_k = prob > 0.0 ? mean_k_acc / prob : 0.0;
  const double sq_k = prob > 0.0 ? sq_k_acc / prob : 0.0;
  const double spread_k = std::sqrt(std::max(sq_k - mean_k * mean_k, 0.0));

  const double k_extreme = std::max(std::abs(grid.k_min), std::abs(grid.k_max));
  const double k_ref = std::max(k_extreme + std::abs(mean_k) + 6.0 * spread_k, 1e-6);
  const double step_xi = kPi / (4.0 * k_ref);

  WignerField field;
  field.grid = grid;
  field.values.assign(static_cast<std::size_t>(grid.nx) * grid.nk, 0.0);
  field.provenance.kind = "numeric_transform";
  field.provenance.detail = "trapezoid xi-quadrature, cubic interpolation";

  // Cubic interpolation needs one sample of margin on the left and two on the
  // right of the bracketing index.
  const double interp_lo = x_start + h;
  const double interp_hi = x_end - 2.0 * h;

  detail::parallel_for_rows(grid.nx, [&](int i) {
    const double x = grid.x(i);
    double* row = field.values.data() + static_cast<std::size_t>(i) * grid.nk;

    const double xi_half = 2.0 * std::min(x - interp_lo, interp_hi - x);
    if (!(xi_half > 0.0)) return;  // x outside the sampled support: W ~ 0 there

    const int max_index = static_cast<int>(std::floor(xi_half / step_xi));
    if (max_index < 1) return;

    auto interpolate = [&](double position) -> std::complex<double> {
      const double offset = (position - x_start) / h;
      int base = static_cast<int>(std::floor(offset));
      base = std::clamp(base, 1, n - 3);
      const double t = offset - base;
      return detail::cubic_interpolate(amp[base - 1], amp[base], amp[base + 1],
                                       amp[base + 2], t);
    };
    auto envelope = [&](double position) -> double {
      const double offset = (position - x_start) / h;
      const int base = std::clamp(static_cast<int>(std::floor(offset)), 0, n - 2);
      const double t = offset - base;
      return modulus[base] * (1.0 - t) + modulus[base + 1] * t;
    };

    // Trim the window to where the product modulus is significant.  The
    // envelope can be multi-humped (superposition states peak again near
    // xi = +/- separation), so find the global peak first and then the
    // outermost point still above the floor.
    std::vector<double> product(max_index + 1);
    double peak_product = 0.0;
    for (int m = 0; m <= max_index; ++m) {
      const double xi = m * step_xi;
      product[m] = envelope(x + 0.5 * xi) * envelope(x - 0.5 * xi);
      peak_product = std::max(peak_product, product[m]);
    }
    int significant = 0;
    for (int m = max_index; m >= 0; --m) {
      if (product[m] >= kWindowFloor * peak_product) {
        significant = m;
        break;
      }
    }
    const int used = std::min(significant + 1, max_index);

    std::vector<std::complex<double>> integrand(used + 1);
    for (int m = 0; m <= used; ++m) {
      const double xi = m * step_xi;
      integrand[m] = interpolate(x + 0.5 * xi) * std::conj(interpolate(x - 0.5 * xi));
    }
    fill_row_from_half_integrand(integrand, step_xi, grid, row);
  });

  return field;
}

WignerField wigner_from_density(const DensityKernel& rho, const PhaseSpaceGrid& grid) {
  validate(grid);

  const double k_extreme = std::max(std::abs(grid.k_min), std::abs(grid.k_max));
  const double k_ref = std::max(k_extreme + rho.k_content(), 1e-6);
  const double step_xi = kPi / (4.0 * k_ref);

  WignerField field;
  field.grid = grid;
  field.values.assign(static_cast<std::size_t>(grid.nx) * grid.nk, 0.0);
  field.provenance.kind = "density_transform";
  field.provenance.detail = "trapezoid xi-quadrature on declared window";

  detail::parallel_for_rows(grid.nx, [&](int i) {
    const double x = grid.x(i);
    double* row = field.values.data() + static_cast<std::size_t>(i) * grid.nk;

    const double xi_half = 2.0 * std::min(x - rho.x_lo(), rho.x_hi() - x);
    if (!(xi_half > 0.0)) return;  // x outside the declared kernel box

    const int max_index = static_cast<int>(std::floor(xi_half / step_xi));
    if (max_index < 1) return;

    std::vector<std::complex<double>> integrand(max_index + 1);
    double peak_f = 0.0;
    for (int m = 0; m <= max_index; ++m) {
      const double xi = m * step_xi;
      integrand[m] = rho(x + 0.5 * xi, x - 0.5 * xi);
      peak_f = std::max(peak_f, std::abs(integrand[m]));
    }

    // The kernel must have decayed below the window floor by the edge of its
    // declared box (unless the edge is the full sampled half-width of a
    // negligible row).
    const double edge = std::abs(integrand[max_index]);
    if (peak_f > 0.0 && edge > kWindowFloor * peak_f) {
      throw SupportEscapeError("xi window edge at x = " + std::to_string(x), edge, peak_f);
    }

    fill_row_from_half_integrand(integrand, step_xi, grid, row);
  });

  return field;
}

PhaseSpaceEvaluator average_over_shift(const ShiftFamilyEvaluator& family,
                                       const FluctuationLaw& law, int order) {
  validate(law);
  if (!family) throw DomainError("average_over_shift requires an evaluator");
  if (order < 4 || order > 256) throw DomainError("quadrature order must be in [4, 256]");

  if (law.sigma == 0.0) {
    const double shift = law.delta0;
    return [family, shift](double x, double k) { return family(shift, x, k); };
  }

  const GaussHermiteRule rule = gauss_hermite(order);
  std::vector<double> shifts(rule.nodes.size());
  std::vector<double> weights(rule.nodes.size());
  const double scale = std::sqrt(2.0) * law.sigma;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    shifts[i] = law.delta0 + scale * rule.nodes[i];
    weights[i] = rule.weights[i] / kSqrtPi;
  }
  return [family, shifts, weights](double x, double k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      sum += weights[i] * family(shifts[i], x, k);
    }
    return sum;
  };
}

PhaseSpaceEvaluator average_over_shift(const PhaseSpaceEvaluator& base,
                                       const FluctuationLaw& law, int order) {
  if (!base) throw DomainError("average_over_shift requires an evaluator");
  return average_over_shift(
      [base](double shift, double x, double k) { return base(x - shift, k); }, law, order);
}

namespace {

std::vector<double> draw_shifts(const FluctuationLaw& law, std::uint64_t samples,
                                std::uint64_t seed, std::uint64_t first_sample_index) {
  const CounterRng rng(seed);
  std::vector<double> shifts(samples);
  for (std::uint64_t i = 0; i < samples; ++i) {
    shifts[i] = law.delta0 + law.sigma * rng.normal(first_sample_index + i);
  }
  return shifts;
}

}  // namespace

MonteCarloStats monte_carlo_average_with_error(const ShiftFamilyEvaluator& family,
                                               const FluctuationLaw& law,
                                               const PhaseSpaceGrid& grid,
                                               std::uint64_t samples, std::uint64_t seed,
                                               std::uint64_t first_sample_index) {
  validate(grid);
  validate(law);
  if (!family) throw DomainError("monte_carlo_average requires an evaluator");
  if (samples < 100) throw DomainError("monte_carlo_average requires samples >= 100");

  const std::vector<double> shifts = draw_shifts(law, samples, seed, first_sample_index);

  MonteCarloStats stats;
  stats.mean.grid = grid;
  stats.mean.values.assign(static_cast<std::size_t>(grid.nx) * grid.nk, 0.0);
  stats.mean.provenance.kind = "monte_carlo";
  stats.mean.provenance.seed = seed;
  stats.mean.provenance.samples = samples;
  if (first_sample_index != 0) {
    stats.mean.provenance.detail =
        "first_sample_index=" + std::to_string(first_sample_index);
  }
  stats.standard_error.assign(stats.mean.values.size(), 0.0);

  const double count = static_cast<double>(samples);
  detail::parallel_for_rows(grid.nx, [&](int i) {
    const double x = grid.x(i);
    const std::size_t offset = static_cast<std::size_t>(i) * grid.nk;
    for (int j = 0; j < grid.nk; ++j) {
      const double k = grid.k(j);
      double sum = 0.0;
      double sum_sq = 0.0;
      for (std::size_t s = 0; s < shifts.size(); ++s) {  // ascending: fixed order
        const double value = family(shifts[s], x, k);
        sum += value;
        sum_sq += value * value;
      }
      const double mean = sum / count;
      const double variance = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
      stats.mean.values[offset + j] = mean;
      stats.standard_error[offset + j] = std::sqrt(variance / count);
    }
  });
  return stats;
}

WignerField monte_carlo_average(const ShiftFamilyEvaluator& family, const FluctuationLaw& law,
                                const PhaseSpaceGrid& grid, std::uint64_t samples,
                                std::uint64_t seed, std::uint64_t first_sample_index) {
  return monte_carlo_average_with_error(family, law, grid, samples, seed, first_sample_index)
      .mean;
}

WignerField monte_carlo_average(const PhaseSpaceEvaluator& base, const FluctuationLaw& law,
                                const PhaseSpaceGrid& grid, std::uint64_t samples,
                                std::uint64_t seed) {
  if (!base) throw DomainError("monte_carlo_average requires an evaluator");
  return monte_carlo_average(
      [base](double shift, double x, double k) { return base(x - shift, k); }, law, grid,
      samples, seed);
}

ReduceResult reduce(const WignerField& field) {
  validate(field);
  const PhaseSpaceGrid& g = field.grid;
  ReduceResult out;
  out.marginal_x.assign(g.nx, 0.0);
  out.marginal_k.assign(g.nk, 0.0);

  std::vector<double> scratch(std::max(g.nx, g.nk));

  for (int i = 0; i < g.nx; ++i) {
    scratch.assign(field.values.begin() + static_cast<std::size_t>(i) * g.nk,
                   field.values.begin() + static_cast<std::size_t>(i + 1) * g.nk);
    out.marginal_x[i] = trapezoid(scratch, g.hk());
  }
  for (int j = 0; j < g.nk; ++j) {
    scratch.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) scratch[i] = field.at(i, j);
    out.marginal_k[j] = trapezoid(scratch, g.hx());
  }
  out.total = trapezoid(out.marginal_x, g.hx());

  if (std::abs(out.total) < 1e-300) return out;  // moments undefined on a null field

  auto moments = [](const std::vector<double>& density, double origin, double h,
                    double total, double& mean, double& variance) {
    std::vector<double> weighted(density.size());
    for (std::size_t i = 0; i < density.size(); ++i) {
      weighted[i] = (origin + h * i) * density[i];
    }
    mean = trapezoid(weighted, h) / total;
    for (std::size_t i = 0; i < density.size(); ++i) {
      const double centered = origin + h * i - mean;
      weighted[i] = centered * centered * density[i];
    }
    variance = trapezoid(weighted, h) / total;
  };
  moments(out.marginal_x, g.x_min, g.hx(), out.total, out.mean_x, out.var_x);
  moments(out.marginal_k, g.k_min, g.hk(), out.total, out.mean_k, out.var_k);
  return out;
}

}  // namespace nwig
