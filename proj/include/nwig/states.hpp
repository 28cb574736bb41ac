#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace nwig {

// Minimum-uncertainty Gaussian wave packet in internal units (lengths in
// 1e-10 m, wavenumbers in 1e10 1/m): mean position x0, mean wavenumber k0,
// spatial spread delta > 0.  The momentum spread is fixed by the minimum
// uncertainty relation delta_k * delta = 1/2.
struct GaussianPacket {
  double x0 = 0.0;
  double k0 = 0.0;
  double delta = 1.0;

  double delta_k() const { return 0.5 / delta; }
};

// Throws DomainError unless delta > 0 and all fields are finite.
void validate(const GaussianPacket& p);

// Gaussian probability law for a random spatial displacement: mean delta0,
// standard deviation sigma >= 0.  sigma == 0 denotes the deterministic
// (delta-distribution) limit.
struct FluctuationLaw {
  double delta0 = 0.0;
  double sigma = 0.0;
};

// Throws DomainError unless sigma >= 0 and all fields are finite.
void validate(const FluctuationLaw& law);

// The four closed-form states:
//   gaussian      – pure minimum-uncertainty packet;
//   squashed      – gaussian averaged over a random rigid shift (a mixed
//                   state: position spread grows to delta' = sqrt(delta^2 +
//                   sigma^2), momentum distribution unchanged);
//   cat           – equal superposition of two packets displaced by +/-
//                   Delta/2, as prepared by a spin-split traversal of a
//                   constant field with post-selection of one spin component;
//   cat_averaged  – cat averaged over a Gaussian-fluctuating separation
//                   (mean delta0, std sigma).
enum class StateTag { gaussian, squashed, cat, cat_averaged };

const char* to_string(StateTag tag);
std::optional<StateTag> state_tag_from_string(std::string_view name);

// Tagged state: a packet plus a fluctuation law whose fields are used
// tag-dependently (gaussian ignores the law; cat uses only delta0 as the
// deterministic separation).  Construct through the named factories, which
// enforce the tag-dependent invariants.
class StateKind {
 public:
  static StateKind gaussian(GaussianPacket p);
  static StateKind squashed(GaussianPacket p, FluctuationLaw law);
  static StateKind cat(GaussianPacket p, double separation_delta);
  static StateKind cat_averaged(GaussianPacket p, FluctuationLaw law);

  StateTag tag() const { return tag_; }
  const GaussianPacket& packet() const { return packet_; }
  const FluctuationLaw& law() const { return law_; }

 private:
  StateKind(StateTag tag, GaussianPacket p, FluctuationLaw law);

  StateTag tag_;
  GaussianPacket packet_;
  FluctuationLaw law_;
};

// Position-space amplitude of the Gaussian packet,
//
//   psi(x) = (2 pi delta^2)^(-1/4) exp[ -(x-x0)^2 / (4 delta^2) + i k0 x ],
//
// normalized so that the integral of |psi|^2 is one.
std::complex<double> psi_position(double x, const GaussianPacket& p);

// Momentum-space amplitude, the Fourier transform
// phi(k) = (2 pi)^(-1/2) Integral dx psi(x) exp(-i k x), which evaluates to
//
//   phi(k) = (2 delta^2 / pi)^(1/4) exp[ -delta^2 (k-k0)^2 - i (k-k0) x0 ].
std::complex<double> phi_momentum(double k, const GaussianPacket& p);

// Closed-form Wigner function of the tagged state at phase-space point (x, k).
//
//   gaussian:     (1/pi) exp[-(x-x0)^2/(2 delta^2)] exp[-2 delta^2 (k-k0)^2]
//   squashed:     (1/pi) (delta/delta') exp[-(x-x0-delta0)^2/(2 delta'^2)]
//                 exp[-2 delta^2 (k-k0)^2],   delta'^2 = delta^2 + sigma^2
//   cat:          (1/4pi) exp[-2 delta^2 (k-k0)^2] *
//                 { exp[-(u-Delta/2)^2/(2 delta^2)] + exp[-(u+Delta/2)^2/(2 delta^2)]
//                   + 2 exp[-u^2/(2 delta^2)] cos(k Delta) },   u = x - x0
//   cat_averaged: the exact Gaussian average of the cat over its separation,
//                 with hump widths D = delta^2 + sigma^2/4 and the
//                 interference damped by exp(-sigma^2 k^2 / 2):
//                 (1/4pi) exp[-2 delta^2 (k-k0)^2] *
//                 { (delta/sqrt(D)) [ exp(-(u-delta0/2)^2/(2D))
//                                   + exp(-(u+delta0/2)^2/(2D)) ]
//                   + 2 exp(-u^2/(2 delta^2)) exp(-sigma^2 k^2/2) cos(k delta0) }
//
// The cosine and damping arguments use the absolute wavenumber k (not k-k0):
// the superposed packets carry the full plane-wave phase exp(i k0 x), so the
// interference fringes sit on absolute k.  The gaussian and squashed forms
// are non-negative everywhere; the cat forms oscillate and go negative.
double wigner(double x, double k, const StateKind& s);

// Closed-form marginals P(x) = Integral dk W and P(k) = Integral dx W for the
// tagged state.  Both are probability densities up to the state's total
// weight (see norm_cat_averaged for the cat forms).
struct ClosedMarginals {
  std::function<double(double)> position;  // P(x)
  std::function<double(double)> momentum;  // P(k)
};
ClosedMarginals marginals_closed(const StateKind& s);

// Total phase-space weight N = Integral dx dk W of the averaged cat.  With
// D = delta^2 + sigma^2/4:
//
//   N = 1/2 [ 1 + (delta/sqrt(D))
//                 exp( -(delta0^2 + 4 delta^2 sigma^2 k0^2) / (8D) )
//                 cos( delta^2 k0 delta0 / D ) ].
//
// This is the probability of the post-selected spin component; N = 1 exactly
// when delta0 = sigma = 0, and N -> 1/2 when the interference term is fully
// suppressed.  (Derived by analytic Gaussian integration of the averaged-cat
// Wigner function; every term is dimensionally a pure number, and the value
// is validated against 2-D quadrature in the tests.)
double norm_cat_averaged(const GaussianPacket& p, const FluctuationLaw& law);

// Averaged-cat Wigner value split into its two Gaussian humps and the
// oscillatory interference term (humps + interference == wigner value).
// Useful for measuring the interference damping in isolation.
struct CatAveragedParts {
  double humps = 0.0;
  double interference = 0.0;
};
CatAveragedParts wigner_cat_averaged_parts(double x, double k, const GaussianPacket& p,
                                           const FluctuationLaw& law);

}  // namespace nwig
