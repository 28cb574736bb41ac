#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nwig/physics.hpp"
#include "nwig/states.hpp"

namespace nwig {

// What the run computes:
//   field      – one Wigner field of the configured state
//   marginals  – closed-form P(x) and P(k) tables of the configured state
//   sweep      – decoherence surface over (delta, sigma) plus extrema report
//   experiment – SI experiment summary (derived kinematics, N, epsilon) plus
//                the separation-averaged field
//   compare_mc – Monte Carlo field vs closed form with deviation statistics
enum class RunMode { field, marginals, sweep, experiment, compare_mc };

enum class OutputFormat { csv, json };

const char* to_string(RunMode mode);
const char* to_string(OutputFormat format);

// Optional grid overrides; anything unset falls back to the state's default
// grid (bounds) or 512 (counts).
struct GridSpec {
  std::optional<int> nx;
  std::optional<int> nk;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::optional<double> k_min;
  std::optional<double> k_max;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// State described directly in internal units (lengths in 1e-10 m,
// wavenumbers in 1e10 1/m).  delta0/sigma are the fluctuation-law fields and
// are consumed tag-dependently (gaussian: both must be 0; cat: sigma must be
// 0; squashed/cat_averaged: both free).
struct StateSpec {
  StateTag tag = StateTag::gaussian;
  double x0 = 0.0;
  double k0 = 0.0;
  double delta = 1.0;
  double delta0 = 0.0;
  double sigma = 0.0;

  friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

// Sweep axes in internal units.  In the config document each axis is either
// an explicit array or a {min, max, step} range; parsing expands ranges to
// explicit arrays (the canonical form).
struct SweepSpec {
  std::vector<double> delta_axis;
  std::vector<double> sigma_axis;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

// Which figure data bundles to emit alongside the mode's own outputs.
// fig1/fig2 (field panel bundles) require mode=experiment; fig3 (surface +
// slice) requires mode=sweep.
struct FiguresSpec {
  bool fig1 = false;
  bool fig2 = false;
  bool fig3 = false;

  bool any() const { return fig1 || fig2 || fig3; }

  friend bool operator==(const FiguresSpec&, const FiguresSpec&) = default;
};

// Fully-resolved run description.  Exactly one of state/experiment is
// present: state specs are internal units, experiment descriptions are SI.
struct RunConfig {
  RunMode mode = RunMode::field;
  std::optional<StateSpec> state;
  std::optional<ExperimentConfig> experiment;
  GridSpec grid;
  std::optional<SweepSpec> sweep;
  FiguresSpec figures;
  std::string out_dir = "out";
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 12345;
  std::uint64_t samples = 10000;
  int quad_order = 64;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Parses and validates a JSON config document (schema in the README):
// defaults are applied, ranges expanded, presets resolved to SI numbers, and
// every unknown key rejected.  Throws ConfigError naming the offending key
// and the expectation.
RunConfig parse_config(const std::string& text);

// Canonical JSON form of a config: every default materialized, sweep ranges
// expanded, presets resolved, keys in sorted order.  The round trip
// parse_config(serialize(c).dump()) == c holds exactly.
nlohmann::json serialize(const RunConfig& config);

// FNV-1a digest of the canonical form; stamped into every output file.
std::string config_digest(const RunConfig& config);

}  // namespace nwig
