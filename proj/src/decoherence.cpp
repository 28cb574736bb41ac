#include "nwig/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nwig/errors.hpp"
#include "nwig/quadrature.hpp"

namespace nwig {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kEdgeFloor = 1e-10;   // containment threshold relative to peak
constexpr double kEpsilonTol = 1e-8;   // raw-epsilon bound tolerance
constexpr double kSlopeFloor = 1e-6;   // extremum noise floor on |d epsilon|

// Largest |W| along one grid edge.
double edge_peak(const WignerField& f, bool x_edge, int fixed_index) {
  double peak = 0.0;
  if (x_edge) {
    for (int j = 0; j < f.grid.nk; ++j) peak = std::max(peak, std::abs(f.at(fixed_index, j)));
  } else {
    for (int i = 0; i < f.grid.nx; ++i) peak = std::max(peak, std::abs(f.at(i, fixed_index)));
  }
  return peak;
}

}  // namespace

Purity purity(const WignerField& field) {
  validate(field);
  const PhaseSpaceGrid& g = field.grid;

  double peak = 0.0;
  for (double v : field.values) peak = std::max(peak, std::abs(v));

  const struct {
    const char* name;
    bool x_edge;
    int index;
  } edges[] = {{"x_min", true, 0},
               {"x_max", true, g.nx - 1},
               {"k_min", false, 0},
               {"k_max", false, g.nk - 1}};
  for (const auto& edge : edges) {
    const double magnitude = edge_peak(field, edge.x_edge, edge.index);
    if (magnitude > kEdgeFloor * peak) {
      throw SupportEscapeError(std::string("grid edge ") + edge.name, magnitude, peak);
    }
  }

  std::vector<double> row(g.nk);
  std::vector<double> row_integrals(g.nx);
  std::vector<double> row_sq_integrals(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.nk; ++j) row[j] = field.at(i, j);
    row_integrals[i] = trapezoid(row, g.hk());
    for (int j = 0; j < g.nk; ++j) row[j] *= row[j];
    row_sq_integrals[i] = trapezoid(row, g.hk());
  }
  Purity p;
  p.trace = trapezoid(row_integrals, g.hx());
  p.trace_sq = kTwoPi * trapezoid(row_sq_integrals, g.hx());
  return p;
}

Purity purity(const PhaseSpaceEvaluator& w, const PhaseSpaceGrid& grid) {
  Provenance provenance;
  provenance.kind = "analytic";
  provenance.detail = "purity evaluation";
  return purity(evaluate_on_grid(w, grid, std::move(provenance)));
}

DecoherenceResult decoherence_parameter(const GaussianPacket& packet,
                                        const FluctuationLaw& law, int resolution) {
  validate(packet);
  validate(law);
  if (resolution < 8) throw DomainError("decoherence resolution must be at least 8");

  const StateKind state = StateKind::cat_averaged(packet, law);
  const PhaseSpaceGrid grid = default_grid(state, resolution, resolution);
  const Purity p = purity(
      [&state](double x, double k) { return wigner(x, k, state); }, grid);

  if (!(p.trace > 0.0)) {
    throw NumericsError("total weight Tr rho is not positive: " + std::to_string(p.trace));
  }

  DecoherenceResult result;
  result.packet = packet;
  result.law = law;
  result.total_N = p.trace;
  result.purity_ratio = p.trace_sq / (p.trace * p.trace);
  result.epsilon = 1.0 - result.purity_ratio;

  if (result.epsilon < -kEpsilonTol || result.epsilon > 1.0 + kEpsilonTol) {
    throw NumericsError("decoherence parameter " + std::to_string(result.epsilon) +
                        " violates the purity bound [0, 1] beyond tolerance; "
                        "the quadrature grid is inadequate");
  }
  return result;
}

namespace {

void validate_axis(const std::vector<double>& axis, const char* name, double lo, double hi) {
  if (axis.empty()) throw DomainError(std::string(name) + " axis must be non-empty");
  double previous = -1e308;
  for (double v : axis) {
    if (!std::isfinite(v) || v < lo || v > hi) {
      throw DomainError(std::string(name) + " axis values must lie in [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (v <= previous) {
      throw DomainError(std::string(name) + " axis must be strictly increasing");
    }
    previous = v;
  }
}

// Per-cell grid sizing: the spatial step must resolve the narrowest Gaussian
// factor (width delta, step <= delta/4) over the default span; the
// wavenumber step must resolve the momentum envelope (width delta_k = 1/2delta),
// the interference fringe (period 2 pi / delta0), and the fluctuation damping
// (scale 1/sigma) over the default span 16 delta_k.  Both counts are clamped
// to [512, 4096].
void cell_grid_size(double delta, double sigma, double delta0, int& nx, int& nk) {
  const double span_x = 2.0 * (8.0 * std::hypot(delta, sigma) + std::abs(delta0));
  const double hx_required = delta / 4.0;
  nx = std::clamp(static_cast<int>(std::ceil(span_x / hx_required)) + 1, 512, 4096);

  const double delta_k = 0.5 / delta;
  const double span_k = 16.0 * delta_k;
  double hk_required = delta_k / 4.0;
  if (delta0 > 0.0) hk_required = std::min(hk_required, 3.14159265358979323846 / (4.0 * delta0));
  if (sigma > 0.0) hk_required = std::min(hk_required, 0.25 / sigma);
  nk = std::clamp(static_cast<int>(std::ceil(span_k / hk_required)) + 1, 512, 4096);
}

}  // namespace

SweepSurface sweep(const std::vector<double>& delta_axis,
                   const std::vector<double>& sigma_axis, double k0, double delta0) {
  validate_axis(delta_axis, "delta", 0.05, 10.0);
  validate_axis(sigma_axis, "sigma", 0.0, 10.0);
  if (!std::isfinite(k0) || !std::isfinite(delta0)) {
    throw DomainError("sweep requires finite k0 and delta0");
  }

  SweepSurface surface;
  surface.delta_axis = delta_axis;
  surface.sigma_axis = sigma_axis;
  surface.k0 = k0;
  surface.delta0 = delta0;
  const std::size_t cells = delta_axis.size() * sigma_axis.size();
  surface.epsilon.assign(cells, std::numeric_limits<double>::quiet_NaN());
  surface.cell_nx.assign(cells, 0);
  surface.cell_nk.assign(cells, 0);

  for (std::size_t i = 0; i < delta_axis.size(); ++i) {
    for (std::size_t j = 0; j < sigma_axis.size(); ++j) {
      const std::size_t cell = i * sigma_axis.size() + j;
      int nx = 0;
      int nk = 0;
      cell_grid_size(delta_axis[i], sigma_axis[j], delta0, nx, nk);
      surface.cell_nx[cell] = nx;
      surface.cell_nk[cell] = nk;
      try {
        GaussianPacket packet;
        packet.x0 = 0.0;
        packet.k0 = k0;
        packet.delta = delta_axis[i];
        FluctuationLaw law;
        law.delta0 = delta0;
        law.sigma = sigma_axis[j];
        // Resolution: decoherence_parameter builds a square grid, so take the
        // larger of the two per-axis requirements.
        const DecoherenceResult cell_result =
            decoherence_parameter(packet, law, std::max(nx, nk));
        surface.epsilon[cell] = cell_result.epsilon;
      } catch (const std::exception& failure) {
        CellFailure record;
        record.delta_index = static_cast<int>(i);
        record.sigma_index = static_cast<int>(j);
        record.message = failure.what();
        surface.failures.push_back(std::move(record));
      }
    }
  }
  return surface;
}

SweepSurface sweep(const std::vector<double>& delta_axis,
                   const std::vector<double>& sigma_axis, const ExperimentConfig& experiment,
                   const NeutronConstants& constants) {
  validate(experiment);
  const Separation separation = cat_separation(experiment, constants);
  const double k0 = UnitScale::wavenumber_to_internal(experiment.mean_wavenumber_k0);
  const double delta0 = UnitScale::length_to_internal(separation.delta0_m);
  return sweep(delta_axis, sigma_axis, k0, delta0);
}

const char* to_string(ExtremumKind kind) {
  return kind == ExtremumKind::max ? "max" : "min";
}

std::vector<Extremum> find_extrema(const SweepSurface& surface) {
  std::vector<Extremum> extrema;
  const std::size_t nsigma = surface.sigma_axis.size();
  for (std::size_t i = 0; i < surface.delta_axis.size(); ++i) {
    for (std::size_t j = 1; j + 1 < nsigma; ++j) {
      const double left = surface.epsilon[i * nsigma + j - 1];
      const double centre = surface.epsilon[i * nsigma + j];
      const double right = surface.epsilon[i * nsigma + j + 1];
      if (!std::isfinite(left) || !std::isfinite(centre) || !std::isfinite(right)) continue;
      const double rise = centre - left;
      const double fall = right - centre;
      if (std::abs(rise) <= kSlopeFloor || std::abs(fall) <= kSlopeFloor) continue;
      if (rise > 0.0 && fall < 0.0) {
        extrema.push_back({surface.delta_axis[i], surface.sigma_axis[j], ExtremumKind::max});
      } else if (rise < 0.0 && fall > 0.0) {
        extrema.push_back({surface.delta_axis[i], surface.sigma_axis[j], ExtremumKind::min});
      }
    }
  }
  return extrema;
}

}  // namespace nwig
