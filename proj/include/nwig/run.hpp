#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nwig/config.hpp"

namespace nwig {

// Everything a run produced: the canonical config echo, derived scalar
// quantities (mode-dependent), and the emitted files with their content
// digests.  to_json() deliberately excludes the wall time so that reruns of
// the same config are byte-identical, report file included; the wall time is
// printed to stdout instead.
struct RunReport {
  nlohmann::json config_echo;
  std::string config_digest;
  std::map<std::string, double> derived;
  std::vector<std::pair<std::string, std::string>> outputs;  // (relative path, digest)
  double wall_time_seconds = 0.0;  // informational only; never serialized

  nlohmann::json to_json() const;
};

// Executes the configured run: computes the mode's artifacts, writes them
// under config.out_dir (plus report.json), and returns the report.  Throws
// ConfigError for unusable configs and DomainError / SupportEscapeError /
// NumericsError for computation failures; partial outputs may exist after a
// throw.
RunReport run(const RunConfig& config);

// Emits the figure data bundles requested in config.figures under
// <out_dir>/figures: fixed parameter sets matching the published panels
// (fig1: three coherent/squeezed panels and three noise-broadened panels;
// fig2: four separation-averaged panels at sigma = 0, 0.5, 1.0, 1.5 with
// delta0 = 0; fig3: the epsilon surface plus the delta = 1.1 slice), each
// with a captions JSON recording the exact parameters.  Returns the emitted
// (relative path, digest) pairs.  Called by run(); exposed for direct use.
std::vector<std::pair<std::string, std::string>> render_figures_data(const RunConfig& config);

// Full command-line entry point: parses arguments, loads and validates the
// config file, applies CLI overrides, dispatches run(), prints a summary.
// Returns the process exit code: 0 success, 2 configuration error, 3
// computation error.  On failure a machine-readable JSON error record goes
// to stderr (and to <out_dir>/error.json when the output directory is
// known).
int cli_main(const std::vector<std::string>& args);

}  // namespace nwig
