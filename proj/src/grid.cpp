#include "nwig/grid.hpp"

#include <cmath>

#include "nwig/errors.hpp"

namespace nwig {

void validate(const PhaseSpaceGrid& g) {
  if (!std::isfinite(g.x_min) || !std::isfinite(g.x_max) || !std::isfinite(g.k_min) ||
      !std::isfinite(g.k_max)) {
    throw DomainError("grid bounds must be finite");
  }
  if (!(g.x_max > g.x_min)) throw DomainError("grid requires x_max > x_min");
  if (!(g.k_max > g.k_min)) throw DomainError("grid requires k_max > k_min");
  if (g.nx < 8 || g.nk < 8) throw DomainError("grid counts must be at least 8");
}

void validate(const WignerField& f) {
  validate(f.grid);
  if (f.values.size() != static_cast<std::size_t>(f.grid.nx) * f.grid.nk) {
    throw DomainError("field value count does not match grid dimensions");
  }
  for (double v : f.values) {
    if (!std::isfinite(v)) throw DomainError("field values must be finite");
  }
  if (f.provenance.kind.empty()) throw DomainError("field provenance must be populated");
}

PhaseSpaceGrid default_grid(const StateKind& s, int nx, int nk) {
  const GaussianPacket& p = s.packet();
  const FluctuationLaw& law = s.law();
  const double spread_x = std::sqrt(p.delta * p.delta + law.sigma * law.sigma);
  const double half_x = 8.0 * spread_x + std::abs(law.delta0);
  const double half_k = 8.0 * p.delta_k();
  PhaseSpaceGrid g;
  g.x_min = p.x0 - half_x;
  g.x_max = p.x0 + half_x;
  g.k_min = p.k0 - half_k;
  g.k_max = p.k0 + half_k;
  g.nx = nx;
  g.nk = nk;
  validate(g);
  return g;
}

}  // namespace nwig
