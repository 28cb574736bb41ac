#include "nwig/states.hpp"

#include <cmath>

#include "nwig/detail/math_util.hpp"
#include "nwig/errors.hpp"

namespace nwig {

namespace {

constexpr double kPi = 3.14159265358979323846;

using detail::exp_clamped;

}  // namespace

void validate(const GaussianPacket& p) {
  if (!std::isfinite(p.x0) || !std::isfinite(p.k0) || !std::isfinite(p.delta)) {
    throw DomainError("packet fields must be finite");
  }
  if (p.delta <= 0.0) throw DomainError("packet spread delta must be positive");
}

void validate(const FluctuationLaw& law) {
  if (!std::isfinite(law.delta0) || !std::isfinite(law.sigma)) {
    throw DomainError("fluctuation law fields must be finite");
  }
  if (law.sigma < 0.0) throw DomainError("fluctuation std sigma must be >= 0");
}

const char* to_string(StateTag tag) {
  switch (tag) {
    case StateTag::gaussian: return "gaussian";
    case StateTag::squashed: return "squashed";
    case StateTag::cat: return "cat";
    case StateTag::cat_averaged: return "cat_averaged";
  }
  return "unknown";
}

std::optional<StateTag> state_tag_from_string(std::string_view name) {
  if (name == "gaussian") return StateTag::gaussian;
  if (name == "squashed") return StateTag::squashed;
  if (name == "cat") return StateTag::cat;
  if (name == "cat_averaged") return StateTag::cat_averaged;
  return std::nullopt;
}

StateKind::StateKind(StateTag tag, GaussianPacket p, FluctuationLaw law)
    : tag_(tag), packet_(p), law_(law) {
  validate(packet_);
  validate(law_);
}

StateKind StateKind::gaussian(GaussianPacket p) {
  return StateKind(StateTag::gaussian, p, FluctuationLaw{});
}

StateKind StateKind::squashed(GaussianPacket p, FluctuationLaw law) {
  return StateKind(StateTag::squashed, p, law);
}

StateKind StateKind::cat(GaussianPacket p, double separation_delta) {
  if (!std::isfinite(separation_delta)) throw DomainError("cat separation must be finite");
  // A deterministic separation is a fluctuation law with zero width.
  return StateKind(StateTag::cat, p, FluctuationLaw{separation_delta, 0.0});
}

StateKind StateKind::cat_averaged(GaussianPacket p, FluctuationLaw law) {
  return StateKind(StateTag::cat_averaged, p, law);
}

std::complex<double> psi_position(double x, const GaussianPacket& p) {
  const double u = x - p.x0;
  const double norm = std::pow(2.0 * kPi * p.delta * p.delta, -0.25);
  const double modulus = norm * exp_clamped(-u * u / (4.0 * p.delta * p.delta));
  return std::polar(modulus, p.k0 * x);
}

std::complex<double> phi_momentum(double k, const GaussianPacket& p) {
  const double q = k - p.k0;
  const double norm = std::pow(2.0 * p.delta * p.delta / kPi, 0.25);
  const double modulus = norm * exp_clamped(-p.delta * p.delta * q * q);
  return std::polar(modulus, -q * p.x0);
}

namespace {

double wigner_gaussian(double x, double k, const GaussianPacket& p) {
  const double u = x - p.x0;
  const double q = k - p.k0;
  const double exponent =
      -u * u / (2.0 * p.delta * p.delta) - 2.0 * p.delta * p.delta * q * q;
  return exp_clamped(exponent) / kPi;
}

double wigner_squashed(double x, double k, const GaussianPacket& p, const FluctuationLaw& law) {
  // Convolving the gaussian Wigner function with the shift law widens the
  // position Gaussian from delta to delta' = sqrt(delta^2 + sigma^2) and
  // recentres it to x0 + delta0; the momentum factor is untouched.
  const double var_x = p.delta * p.delta + law.sigma * law.sigma;
  const double u = x - p.x0 - law.delta0;
  const double q = k - p.k0;
  const double exponent = -u * u / (2.0 * var_x) - 2.0 * p.delta * p.delta * q * q;
  return (p.delta / std::sqrt(var_x)) * exp_clamped(exponent) / kPi;
}

double wigner_cat(double x, double k, const GaussianPacket& p, double separation) {
  const double u = x - p.x0;
  const double q = k - p.k0;
  const double dd2 = 2.0 * p.delta * p.delta;  // = 1/(2 delta_k^2)
  const double envelope = exp_clamped(-dd2 * q * q);
  if (envelope == 0.0) return 0.0;
  const double half = 0.5 * separation;
  const double hump_minus = exp_clamped(-(u - half) * (u - half) / dd2);
  const double hump_plus = exp_clamped(-(u + half) * (u + half) / dd2);
  const double interference = 2.0 * exp_clamped(-u * u / dd2) * std::cos(k * separation);
  return envelope * (hump_minus + hump_plus + interference) / (4.0 * kPi);
}

}  // namespace

CatAveragedParts wigner_cat_averaged_parts(double x, double k, const GaussianPacket& p,
                                           const FluctuationLaw& law) {
  const double u = x - p.x0;
  const double q = k - p.k0;
  const double dd2 = 2.0 * p.delta * p.delta;
  const double big_d = p.delta * p.delta + 0.25 * law.sigma * law.sigma;
  const double envelope = exp_clamped(-dd2 * q * q) / (4.0 * kPi);

  CatAveragedParts parts;
  if (envelope == 0.0) return parts;

  const double half = 0.5 * law.delta0;
  const double widened = p.delta / std::sqrt(big_d);
  parts.humps = envelope * widened *
                (exp_clamped(-(u - half) * (u - half) / (2.0 * big_d)) +
                 exp_clamped(-(u + half) * (u + half) / (2.0 * big_d)));
  parts.interference = envelope * 2.0 * exp_clamped(-u * u / dd2) *
                       exp_clamped(-0.5 * law.sigma * law.sigma * k * k) *
                       std::cos(k * law.delta0);
  return parts;
}

double wigner(double x, double k, const StateKind& s) {
  switch (s.tag()) {
    case StateTag::gaussian:
      return wigner_gaussian(x, k, s.packet());
    case StateTag::squashed:
      return wigner_squashed(x, k, s.packet(), s.law());
    case StateTag::cat:
      return wigner_cat(x, k, s.packet(), s.law().delta0);
    case StateTag::cat_averaged: {
      const CatAveragedParts parts = wigner_cat_averaged_parts(x, k, s.packet(), s.law());
      return parts.humps + parts.interference;
    }
  }
  throw DomainError("invalid state tag");
}

namespace {

double gaussian_density(double v, double mean, double variance) {
  return exp_clamped(-(v - mean) * (v - mean) / (2.0 * variance)) /
         std::sqrt(2.0 * kPi * variance);
}

}  // namespace

ClosedMarginals marginals_closed(const StateKind& s) {
  const GaussianPacket p = s.packet();
  const FluctuationLaw law = s.law();
  ClosedMarginals m;

  switch (s.tag()) {
    case StateTag::gaussian: {
      // P(x) = |psi(x)|^2, P(k) = |phi(k)|^2.
      m.position = [p](double x) { return gaussian_density(x, p.x0, p.delta * p.delta); };
      m.momentum = [p](double k) {
        return std::sqrt(2.0 * p.delta * p.delta / kPi) *
               exp_clamped(-2.0 * p.delta * p.delta * (k - p.k0) * (k - p.k0));
      };
      break;
    }
    case StateTag::squashed: {
      // Position spread grows to delta'^2 = delta^2 + sigma^2; the momentum
      // distribution is unaltered by the random shift.
      const double var_x = p.delta * p.delta + law.sigma * law.sigma;
      m.position = [p, law, var_x](double x) {
        return gaussian_density(x, p.x0 + law.delta0, var_x);
      };
      m.momentum = [p](double k) {
        return std::sqrt(2.0 * p.delta * p.delta / kPi) *
               exp_clamped(-2.0 * p.delta * p.delta * (k - p.k0) * (k - p.k0));
      };
      break;
    }
    case StateTag::cat: {
      // Integrating the cat Wigner function over k: the interference column
      // picks up the Fourier factor exp(-Delta^2/(8 delta^2)) cos(k0 Delta).
      const double sep = law.delta0;
      m.position = [p, sep](double x) {
        const double u = x - p.x0;
        const double dd2 = 2.0 * p.delta * p.delta;
        const double cross = 2.0 * exp_clamped(-u * u / dd2) *
                             exp_clamped(-sep * sep / (8.0 * p.delta * p.delta)) *
                             std::cos(p.k0 * sep);
        return (exp_clamped(-(u - 0.5 * sep) * (u - 0.5 * sep) / dd2) +
                exp_clamped(-(u + 0.5 * sep) * (u + 0.5 * sep) / dd2) + cross) /
               (4.0 * std::sqrt(2.0 * kPi) * p.delta);
      };
      // Same form as the averaged momentum marginal with sigma = 0.
      m.momentum = [p, sep](double k) {
        const double q = k - p.k0;
        return std::sqrt(p.delta * p.delta / (2.0 * kPi)) *
               exp_clamped(-2.0 * p.delta * p.delta * q * q) * (1.0 + std::cos(k * sep));
      };
      break;
    }
    case StateTag::cat_averaged: {
      // Humps widen to D = delta^2 + sigma^2/4; the interference column is
      // damped both by the separation average (Gaussian in Delta) and by the
      // wavenumber integral.
      const double big_d = p.delta * p.delta + 0.25 * law.sigma * law.sigma;
      m.position = [p, law, big_d](double x) {
        const double u = x - p.x0;
        const double half = 0.5 * law.delta0;
        const double humps = (exp_clamped(-(u - half) * (u - half) / (2.0 * big_d)) +
                              exp_clamped(-(u + half) * (u + half) / (2.0 * big_d))) /
                             (4.0 * std::sqrt(2.0 * kPi * big_d));
        const double dd = p.delta * p.delta;
        const double damping =
            exp_clamped(-(4.0 * dd * law.sigma * law.sigma * p.k0 * p.k0 +
                          law.delta0 * law.delta0) /
                        (8.0 * big_d));
        const double cross = exp_clamped(-u * u / (2.0 * dd)) * damping *
                             std::cos(dd * p.k0 * law.delta0 / big_d) /
                             (2.0 * std::sqrt(2.0 * kPi * big_d));
        return humps + cross;
      };
      m.momentum = [p, law](double k) {
        const double q = k - p.k0;
        return std::sqrt(p.delta * p.delta / (2.0 * kPi)) *
               exp_clamped(-2.0 * p.delta * p.delta * q * q) *
               (1.0 + exp_clamped(-0.5 * law.sigma * law.sigma * k * k) *
                          std::cos(k * law.delta0));
      };
      break;
    }
  }
  return m;
}

double norm_cat_averaged(const GaussianPacket& p, const FluctuationLaw& law) {
  validate(p);
  validate(law);
  const double dd = p.delta * p.delta;
  const double big_d = dd + 0.25 * law.sigma * law.sigma;
  const double damping = exp_clamped(
      -(law.delta0 * law.delta0 + 4.0 * dd * law.sigma * law.sigma * p.k0 * p.k0) /
      (8.0 * big_d));
  const double fringe = std::cos(dd * p.k0 * law.delta0 / big_d);
  return 0.5 * (1.0 + (p.delta / std::sqrt(big_d)) * damping * fringe);
}

}  // namespace nwig
