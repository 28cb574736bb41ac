#include "nwig/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nwig/decoherence.hpp"
#include "nwig/errors.hpp"
#include "nwig/io.hpp"
#include "nwig/physics.hpp"
#include "nwig/states.hpp"
#include "nwig/transform.hpp"
#include "nwig/version.hpp"

namespace nwig {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Collects emitted files and their digests under one output root.
struct Emitter {
  fs::path root;
  std::string digest;  // config digest stamped into every file header
  std::vector<std::pair<std::string, std::string>> written;

  void emit(const std::string& relative_path, const std::string& content) {
    write_text_file(root / relative_path, content);
    written.emplace_back(relative_path, fnv1a64_hex(content));
  }
};

StateKind resolve_state(const StateSpec& spec) {
  const GaussianPacket packet{spec.x0, spec.k0, spec.delta};
  switch (spec.tag) {
    case StateTag::gaussian:
      return StateKind::gaussian(packet);
    case StateTag::squashed:
      return StateKind::squashed(packet, FluctuationLaw{spec.delta0, spec.sigma});
    case StateTag::cat:
      return StateKind::cat(packet, spec.delta0);
    case StateTag::cat_averaged:
      return StateKind::cat_averaged(packet, FluctuationLaw{spec.delta0, spec.sigma});
  }
  throw DomainError("unknown state tag");
}

// Internal-unit packet and fluctuation law implied by an SI experiment
// description: the separation-averaged superposition prepared by the
// spin-split traversal.
struct ExperimentState {
  GaussianPacket packet;
  FluctuationLaw law;
};

ExperimentState experiment_state(const ExperimentConfig& experiment) {
  const Separation separation = cat_separation(experiment);
  ExperimentState out;
  out.packet.x0 = 0.0;
  out.packet.k0 = UnitScale::wavenumber_to_internal(experiment.mean_wavenumber_k0);
  out.packet.delta = UnitScale::length_to_internal(experiment.packet_spread_delta);
  out.law.delta0 = UnitScale::length_to_internal(separation.delta0_m);
  out.law.sigma = UnitScale::length_to_internal(separation.sigma_m);
  return out;
}

// The state a field/marginals run describes: the configured state spec, or
// the separation-averaged state derived from the experiment.
StateKind source_state(const RunConfig& config) {
  if (config.state) return resolve_state(*config.state);
  const ExperimentState derived = experiment_state(*config.experiment);
  return StateKind::cat_averaged(derived.packet, derived.law);
}

PhaseSpaceGrid resolve_grid(const StateKind& state, const GridSpec& spec,
                            int fallback_count = 513) {
  PhaseSpaceGrid grid = default_grid(state, spec.nx.value_or(fallback_count),
                                     spec.nk.value_or(fallback_count));
  if (spec.x_min) grid.x_min = *spec.x_min;
  if (spec.x_max) grid.x_max = *spec.x_max;
  if (spec.k_min) grid.k_min = *spec.k_min;
  if (spec.k_max) grid.k_max = *spec.k_max;
  validate(grid);
  return grid;
}

Provenance analytic_provenance(const StateKind& state) {
  Provenance p;
  p.kind = "analytic";
  p.state = to_string(state.tag());
  p.detail = "closed form";
  return p;
}

void emit_field_file(Emitter& emitter, const WignerField& field, const std::string& base,
                     OutputFormat format) {
  if (format == OutputFormat::csv) {
    emitter.emit(base + ".csv", field_to_csv(field, emitter.digest));
  } else {
    emitter.emit(base + ".json", field_to_json(field, emitter.digest).dump(2) + "\n");
  }
}

void emit_table_file(Emitter& emitter, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns, const std::string& base,
                     OutputFormat format) {
  if (format == OutputFormat::csv) {
    emitter.emit(base + ".csv", table_to_csv(names, columns, emitter.digest));
  } else {
    emitter.emit(base + ".json", table_to_json(names, columns, emitter.digest).dump(2) + "\n");
  }
}

// ---------------------------------------------------------------------------
// mode: field
// ---------------------------------------------------------------------------
void run_field(const RunConfig& config, Emitter& emitter,
               std::map<std::string, double>& derived) {
  const StateKind state = source_state(config);
  const PhaseSpaceGrid grid = resolve_grid(state, config.grid);
  const WignerField field = evaluate_on_grid(
      [state](double x, double k) { return wigner(x, k, state); }, grid,
      analytic_provenance(state));
  emit_field_file(emitter, field, "field", config.format);

  const ReduceResult totals = reduce(field);
  derived["total"] = totals.total;
  derived["mean_x"] = totals.mean_x;
  derived["var_x"] = totals.var_x;
  derived["mean_k"] = totals.mean_k;
  derived["var_k"] = totals.var_k;
  derived["peak_w"] = *std::max_element(field.values.begin(), field.values.end());
  derived["grid_nx"] = grid.nx;
  derived["grid_nk"] = grid.nk;
}

// ---------------------------------------------------------------------------
// mode: marginals
// ---------------------------------------------------------------------------
void run_marginals(const RunConfig& config, Emitter& emitter,
                   std::map<std::string, double>& derived) {
  const StateKind state = source_state(config);
  const PhaseSpaceGrid grid = resolve_grid(state, config.grid);
  const ClosedMarginals closed = marginals_closed(state);

  std::vector<double> x_nodes(grid.nx), px(grid.nx);
  for (int i = 0; i < grid.nx; ++i) {
    x_nodes[i] = grid.x(i);
    px[i] = closed.position(x_nodes[i]);
  }
  std::vector<double> k_nodes(grid.nk), pk(grid.nk);
  for (int j = 0; j < grid.nk; ++j) {
    k_nodes[j] = grid.k(j);
    pk[j] = closed.momentum(k_nodes[j]);
  }
  emit_table_file(emitter, {"x", "px"}, {x_nodes, px}, "marginal_x", config.format);
  emit_table_file(emitter, {"k", "pk"}, {k_nodes, pk}, "marginal_k", config.format);

  derived["total_x"] = trapezoid(px, grid.hx());
  derived["total_k"] = trapezoid(pk, grid.hk());
  derived["grid_nx"] = grid.nx;
  derived["grid_nk"] = grid.nk;
}

// ---------------------------------------------------------------------------
// mode: sweep
// ---------------------------------------------------------------------------
void run_sweep(const RunConfig& config, Emitter& emitter,
               std::map<std::string, double>& derived) {
  double k0 = 0.0;
  double delta0 = 0.0;
  if (config.state) {
    k0 = config.state->k0;
    delta0 = config.state->delta0;
  } else {
    const ExperimentState derived_state = experiment_state(*config.experiment);
    k0 = derived_state.packet.k0;
    delta0 = derived_state.law.delta0;
  }

  const SweepSurface surface =
      sweep(config.sweep->delta_axis, config.sweep->sigma_axis, k0, delta0);
  const std::vector<Extremum> extrema = find_extrema(surface);

  if (config.format == OutputFormat::csv) {
    emitter.emit("surface.csv", sweep_to_csv(surface, emitter.digest));
    emitter.emit("extrema.json", sweep_to_json(surface, extrema, emitter.digest)
                                     .at("extrema")
                                     .dump(2) + "\n");
  } else {
    emitter.emit("surface.json",
                 sweep_to_json(surface, extrema, emitter.digest).dump(2) + "\n");
  }

  double epsilon_min = std::numeric_limits<double>::infinity();
  double epsilon_max = -std::numeric_limits<double>::infinity();
  for (double value : surface.epsilon) {
    if (!std::isfinite(value)) continue;
    epsilon_min = std::min(epsilon_min, value);
    epsilon_max = std::max(epsilon_max, value);
  }
  derived["cells"] = static_cast<double>(surface.epsilon.size());
  derived["cell_failures"] = static_cast<double>(surface.failures.size());
  derived["extrema_count"] = static_cast<double>(extrema.size());
  derived["epsilon_min"] = epsilon_min;
  derived["epsilon_max"] = epsilon_max;
}

// ---------------------------------------------------------------------------
// mode: experiment
// ---------------------------------------------------------------------------
void run_experiment(const RunConfig& config, Emitter& emitter,
                    std::map<std::string, double>& derived) {
  const ExperimentConfig& experiment = *config.experiment;
  validate(experiment);

  const double dk = momentum_shift(experiment.field_mean_B0, experiment.mean_wavenumber_k0);
  const double shift_m = displacement(experiment.field_mean_B0, experiment.region_length_L,
                                      experiment.mean_wavenumber_k0);
  const Separation separation = cat_separation(experiment);
  const double flight_s =
      time_of_flight(experiment.region_length_L, experiment.mean_wavenumber_k0);
  const double spread_m = free_spread(experiment.packet_spread_delta, flight_s);
  const ExperimentState internal = experiment_state(experiment);

  derived["momentum_shift_per_m"] = dk;
  derived["displacement_m"] = shift_m;
  derived["separation_delta0_m"] = separation.delta0_m;
  derived["separation_delta0_internal"] = internal.law.delta0;
  derived["sigma_m"] = separation.sigma_m;
  derived["sigma_internal"] = internal.law.sigma;
  derived["time_of_flight_s"] = flight_s;
  derived["free_spread_m"] = spread_m;
  derived["k0_internal"] = internal.packet.k0;
  derived["delta_internal"] = internal.packet.delta;
  derived["norm_N"] = norm_cat_averaged(internal.packet, internal.law);

  const DecoherenceResult decoherence =
      decoherence_parameter(internal.packet, internal.law);
  derived["epsilon"] = decoherence.epsilon;
  derived["epsilon_clamped"] = decoherence.epsilon_clamped();
  derived["purity_ratio"] = decoherence.purity_ratio;

  const StateKind state = StateKind::cat_averaged(internal.packet, internal.law);
  const PhaseSpaceGrid grid = resolve_grid(state, config.grid);
  const WignerField field = evaluate_on_grid(
      [state](double x, double k) { return wigner(x, k, state); }, grid,
      analytic_provenance(state));
  emit_field_file(emitter, field, "experiment_field", config.format);
  derived["field_total"] = reduce(field).total;
}

// ---------------------------------------------------------------------------
// mode: compare-mc
// ---------------------------------------------------------------------------
void run_compare_mc(const RunConfig& config, Emitter& emitter,
                    std::map<std::string, double>& derived) {
  const StateSpec& spec = *config.state;
  const GaussianPacket packet{spec.x0, spec.k0, spec.delta};
  const FluctuationLaw law{spec.delta0, spec.sigma};
  const StateKind closed = resolve_state(spec);

  // The displacement-parameterized family whose law-average is the closed
  // form: a rigid shift of the base packet for the squashed state, the
  // separation-Delta superposition for the averaged cat.
  ShiftFamilyEvaluator family;
  if (spec.tag == StateTag::squashed) {
    const StateKind base = StateKind::gaussian(packet);
    family = [base](double shift, double x, double k) { return wigner(x - shift, k, base); };
  } else {
    family = [packet](double shift, double x, double k) {
      const CatAveragedParts parts =
          wigner_cat_averaged_parts(x, k, packet, FluctuationLaw{shift, 0.0});
      return parts.humps + parts.interference;
    };
  }

  // Default to a coarse statistics lattice: Monte Carlo cost scales with
  // nodes x samples, and z-score statistics do not need a dense field.
  const PhaseSpaceGrid grid = resolve_grid(closed, config.grid, 49);

  const WignerField exact = evaluate_on_grid(
      [closed](double x, double k) { return wigner(x, k, closed); }, grid,
      analytic_provenance(closed));

  MonteCarloStats stats =
      monte_carlo_average_with_error(family, law, grid, config.samples, config.seed);
  stats.mean.provenance.state = to_string(spec.tag);

  emit_field_file(emitter, stats.mean, "mc_field", config.format);
  emit_field_file(emitter, exact, "analytic_field", config.format);

  // z-scores are meaningful only where the sampled spread resolves the
  // function; in far tails the sample standard error underestimates the
  // true error (the dominant shifts are never drawn).  Deviations there are
  // measured against a floor of 1e-6 of the closed-form peak instead, so
  // |z| < 5 additionally asserts |mc - exact| < 5e-6 * peak at such nodes.
  double peak_exact = 0.0;
  for (double value : exact.values) peak_exact = std::max(peak_exact, std::abs(value));
  const double error_floor = 1e-6 * peak_exact;

  const std::size_t nodes = exact.values.size();
  std::vector<double> xs(nodes), ks(nodes), z(nodes);
  double max_abs_z = 0.0;
  double sum_abs_z = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.nk; ++j) {
      const std::size_t node = static_cast<std::size_t>(i) * grid.nk + j;
      xs[node] = grid.x(i);
      ks[node] = grid.k(j);
      const double spread = std::max(stats.standard_error[node], error_floor);
      z[node] = (stats.mean.values[node] - exact.values[node]) / spread;
      max_abs_z = std::max(max_abs_z, std::abs(z[node]));
      sum_abs_z += std::abs(z[node]);
    }
  }
  emit_table_file(emitter, {"x", "k", "w_mc", "w_exact", "std_error", "z"},
                  {xs, ks, stats.mean.values, exact.values, stats.standard_error, z},
                  "deviation", config.format);

  derived["max_abs_z"] = max_abs_z;
  derived["mean_abs_z"] = sum_abs_z / static_cast<double>(nodes);
  derived["nodes"] = static_cast<double>(nodes);
  derived["mc_samples"] = static_cast<double>(config.samples);
  derived["grid_nx"] = grid.nx;
  derived["grid_nk"] = grid.nk;
}

// ---------------------------------------------------------------------------
// figure bundles
// ---------------------------------------------------------------------------

void render_fig1(Emitter& emitter, OutputFormat format) {
  const double k0 = 1.7;
  const double coherent_delta = std::sqrt(0.5);  // equal scaled widths
  const std::vector<double> upper_deltas = {coherent_delta, 1.0, std::sqrt(2.0)};
  const std::vector<double> lower_sigmas = {0.0, std::sqrt(0.5), std::sqrt(1.5)};

  // Shared panel axes: widest x-support and widest k-support of each row.
  // Both rows end up with the same spans (largest delta vs largest
  // delta' = sqrt(delta^2 + sigma^2)).
  PhaseSpaceGrid grid;
  grid.nx = 201;
  grid.nk = 201;
  grid.x_min = -8.0 * std::sqrt(2.0);
  grid.x_max = 8.0 * std::sqrt(2.0);
  const double widest_delta_k = 0.5 / coherent_delta;
  grid.k_min = k0 - 8.0 * widest_delta_k;
  grid.k_max = k0 + 8.0 * widest_delta_k;

  json panels = json::array();
  const std::string extension = format == OutputFormat::csv ? ".csv" : ".json";

  for (std::size_t index = 0; index < upper_deltas.size(); ++index) {
    const double delta = upper_deltas[index];
    const StateKind state = StateKind::gaussian(GaussianPacket{0.0, k0, delta});
    const WignerField field = evaluate_on_grid(
        [state](double x, double k) { return wigner(x, k, state); }, grid,
        analytic_provenance(state));
    const std::string base = "figures/fig1_gaussian_" + std::to_string(index + 1);
    emit_field_file(emitter, field, base, format);
    panels.push_back({{"file", base + extension},
                      {"row", "upper"},
                      {"state", "gaussian"},
                      {"x0", 0.0},
                      {"k0", k0},
                      {"delta", delta},
                      {"delta_k", 0.5 / delta},
                      {"uncertainty_product", (0.5 / delta) * delta}});
  }
  for (std::size_t index = 0; index < lower_sigmas.size(); ++index) {
    const double sigma = lower_sigmas[index];
    const double delta_prime = std::hypot(coherent_delta, sigma);
    const StateKind state = StateKind::squashed(GaussianPacket{0.0, k0, coherent_delta},
                                                FluctuationLaw{0.0, sigma});
    const WignerField field = evaluate_on_grid(
        [state](double x, double k) { return wigner(x, k, state); }, grid,
        analytic_provenance(state));
    const std::string base = "figures/fig1_squashed_" + std::to_string(index + 1);
    emit_field_file(emitter, field, base, format);
    panels.push_back({{"file", base + extension},
                      {"row", "lower"},
                      {"state", "squashed"},
                      {"x0", 0.0},
                      {"k0", k0},
                      {"delta", coherent_delta},
                      {"delta0", 0.0},
                      {"sigma", sigma},
                      {"delta_prime", delta_prime},
                      {"delta_k_delta_prime", (0.5 / coherent_delta) * delta_prime}});
  }

  json captions;
  captions["figure"] = "fig1";
  captions["panels"] = panels;
  emitter.emit("figures/fig1_captions.json", captions.dump(2) + "\n");
}

void render_fig2(Emitter& emitter, OutputFormat format) {
  const GaussianPacket packet{0.0, 1.7, 1.1};
  const double delta0 = 0.0;
  const std::vector<double> sigmas = {0.0, 0.5, 1.0, 1.5};

  // Shared panel axes sized for the widest panel (largest sigma).
  const StateKind widest =
      StateKind::cat_averaged(packet, FluctuationLaw{delta0, sigmas.back()});
  const PhaseSpaceGrid grid = default_grid(widest, 201, 201);

  json panels = json::array();
  const std::string extension = format == OutputFormat::csv ? ".csv" : ".json";
  for (std::size_t index = 0; index < sigmas.size(); ++index) {
    const StateKind state =
        StateKind::cat_averaged(packet, FluctuationLaw{delta0, sigmas[index]});
    const WignerField field = evaluate_on_grid(
        [state](double x, double k) { return wigner(x, k, state); }, grid,
        analytic_provenance(state));
    const std::string base = "figures/fig2_panel_" + std::to_string(index + 1);
    emit_field_file(emitter, field, base, format);
    panels.push_back({{"file", base + extension},
                      {"state", "cat_averaged"},
                      {"x0", packet.x0},
                      {"k0", packet.k0},
                      {"delta", packet.delta},
                      {"delta0", delta0},
                      {"sigma", sigmas[index]},
                      {"norm_N", norm_cat_averaged(packet, FluctuationLaw{delta0, sigmas[index]})}});
  }

  json captions;
  captions["figure"] = "fig2";
  captions["state"] = "cat_averaged";
  captions["delta"] = packet.delta;
  captions["k0"] = packet.k0;
  captions["delta0"] = delta0;
  captions["sigma_values"] = sigmas;
  captions["panels"] = panels;
  emitter.emit("figures/fig2_captions.json", captions.dump(2) + "\n");
}

void render_fig3(Emitter& emitter, OutputFormat format) {
  const double k0 = 1.7;
  const double delta0 = 16.1;
  const double slice_delta = 1.1;

  std::vector<double> delta_axis;
  for (int i = 0; i <= 18; ++i) delta_axis.push_back(0.5 + 0.25 * i);
  std::vector<double> sigma_axis;
  for (int j = 0; j <= 20; ++j) sigma_axis.push_back(0.125 * j);

  const SweepSurface surface = sweep(delta_axis, sigma_axis, k0, delta0);
  const std::vector<Extremum> extrema = find_extrema(surface);

  if (format == OutputFormat::csv) {
    emitter.emit("figures/fig3_surface.csv", sweep_to_csv(surface, emitter.digest));
  } else {
    emitter.emit("figures/fig3_surface.json",
                 sweep_to_json(surface, extrema, emitter.digest).dump(2) + "\n");
  }

  std::vector<double> slice_sigmas;
  std::vector<double> slice_epsilons;
  for (int j = 0; j <= 40; ++j) {
    const double sigma = 0.05 * j;
    slice_sigmas.push_back(sigma);
    slice_epsilons.push_back(
        decoherence_parameter(GaussianPacket{0.0, k0, slice_delta},
                              FluctuationLaw{delta0, sigma})
            .epsilon);
  }
  emit_table_file(emitter, {"sigma", "epsilon"}, {slice_sigmas, slice_epsilons},
                  "figures/fig3_slice", format);

  json extrema_json = json::array();
  for (const Extremum& extremum : extrema) {
    extrema_json.push_back({{"delta", extremum.delta},
                            {"sigma", extremum.sigma},
                            {"kind", to_string(extremum.kind)}});
  }
  emitter.emit("figures/fig3_extrema.json", extrema_json.dump(2) + "\n");

  const std::string extension = format == OutputFormat::csv ? ".csv" : ".json";
  json captions;
  captions["figure"] = "fig3";
  captions["surface"] = {{"file", std::string("figures/fig3_surface") + extension},
                         {"delta_axis", delta_axis},
                         {"sigma_axis", sigma_axis},
                         {"k0", k0},
                         {"delta0", delta0}};
  captions["slice"] = {{"file", std::string("figures/fig3_slice") + extension},
                       {"delta", slice_delta},
                       {"k0", k0},
                       {"delta0", delta0},
                       {"sigma_values", slice_sigmas}};
  emitter.emit("figures/fig3_captions.json", captions.dump(2) + "\n");
}

void print_report_summary(const RunReport& report, const RunConfig& config) {
  std::cout << kToolName << ' ' << kToolVersion << " mode=" << to_string(config.mode)
            << " out=" << config.out_dir << " config=" << report.config_digest << '\n';
  std::cout << "derived:\n";
  for (const auto& [key, value] : report.derived) {
    std::cout << "  " << key << " = " << format_double(value) << '\n';
  }
  std::cout << "outputs:\n";
  for (const auto& [path, digest] : report.outputs) {
    std::cout << "  " << path << "  fnv1a64=" << digest << '\n';
  }
  // Wall time goes to stdout only: report.json stays byte-identical across
  // reruns of the same config.
  std::cout << "wall_time_seconds=" << report.wall_time_seconds << '\n';
}

void emit_error_record(int exit_code, const std::string& error_type,
                       const std::string& message, const std::string& out_dir) {
  json record;
  record["schema"] = "run-error/1";
  record["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  record["error_type"] = error_type;
  record["message"] = message;
  record["exit_code"] = exit_code;
  std::cerr << record.dump() << '\n';
  if (!out_dir.empty()) {
    try {
      write_text_file(fs::path(out_dir) / "error.json", record.dump(2) + "\n");
    } catch (const std::exception&) {
      // Best effort only; the stderr record already carries the information.
    }
  }
}

}  // namespace

nlohmann::json RunReport::to_json() const {
  json j;
  j["schema"] = "run-report/1";
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["config"] = config_echo;
  j["config_digest"] = config_digest;
  j["derived"] = json(derived);
  json outs = json::array();
  for (const auto& [path, digest] : outputs) {
    outs.push_back({{"path", path}, {"digest", digest}});
  }
  j["outputs"] = outs;
  return j;
}

std::vector<std::pair<std::string, std::string>> render_figures_data(const RunConfig& config) {
  Emitter emitter{fs::path(config.out_dir), config_digest(config), {}};
  if (config.figures.fig1) render_fig1(emitter, config.format);
  if (config.figures.fig2) render_fig2(emitter, config.format);
  if (config.figures.fig3) render_fig3(emitter, config.format);
  return emitter.written;
}

RunReport run(const RunConfig& config) {
  RunReport report;
  // The echo omits the output directory for the same reason the digest does:
  // report.json must be byte-identical wherever the run lands.
  report.config_echo = serialize(config);
  report.config_echo.erase("out");
  report.config_digest = config_digest(config);

  Emitter emitter{fs::path(config.out_dir), report.config_digest, {}};
  switch (config.mode) {
    case RunMode::field:
      run_field(config, emitter, report.derived);
      break;
    case RunMode::marginals:
      run_marginals(config, emitter, report.derived);
      break;
    case RunMode::sweep:
      run_sweep(config, emitter, report.derived);
      break;
    case RunMode::experiment:
      run_experiment(config, emitter, report.derived);
      break;
    case RunMode::compare_mc:
      run_compare_mc(config, emitter, report.derived);
      break;
  }

  if (config.figures.any()) {
    for (auto& entry : render_figures_data(config)) {
      emitter.written.push_back(std::move(entry));
    }
  }

  report.outputs = emitter.written;
  write_text_file(fs::path(config.out_dir) / "report.json", report.to_json().dump(2) + "\n");
  return report;
}

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{std::string("Wigner quasidistribution toolkit for Gaussian and "
                           "superposition wave packets (") +
               kToolName + " " + kToolVersion + ")"};
  app.name(kToolName);

  std::string mode_arg;
  app.add_option("mode", mode_arg, "What to compute")
      ->required()
      ->check(CLI::IsMember({"field", "marginals", "sweep", "experiment", "compare-mc"}));
  std::string config_path;
  app.add_option("-c,--config", config_path, "Path to the JSON run configuration")->required();
  std::string out_dir;
  CLI::Option* out_option = app.add_option("--out", out_dir, "Output directory override");
  std::string format_name;
  CLI::Option* format_option = app.add_option("--format", format_name, "Output format override")
                                   ->check(CLI::IsMember({"csv", "json"}));
  std::uint64_t seed = 0;
  CLI::Option* seed_option = app.add_option("--seed", seed, "Sampling seed override");
  std::uint64_t samples = 0;
  CLI::Option* samples_option =
      app.add_option("--samples", samples, "Monte Carlo sample count override");
  std::string grid_arg;
  CLI::Option* grid_option =
      app.add_option("--grid", grid_arg, "Grid node counts override as nx,nk");
  int quad_order = 0;
  CLI::Option* quad_option =
      app.add_option("--quad-order", quad_order, "Gauss-Hermite order override");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 2;
  }

  std::string out_for_errors;
  try {
    std::string config_text;
    try {
      config_text = read_text_file(config_path);
    } catch (const std::runtime_error& error) {
      throw ConfigError(error.what());
    }
    RunConfig config = parse_config(config_text);
    out_for_errors = config.out_dir;
    if (out_option->count() > 0 && !out_dir.empty()) out_for_errors = out_dir;
    if (mode_arg != to_string(config.mode)) {
      throw ConfigError(std::string("CLI mode '") + mode_arg + "' does not match config mode '" +
                        to_string(config.mode) + "'");
    }
    if (out_option->count() > 0) {
      if (out_dir.empty()) throw ConfigError("--out must be a non-empty path");
      config.out_dir = out_dir;
    }
    if (format_option->count() > 0) {
      config.format = format_name == "json" ? OutputFormat::json : OutputFormat::csv;
    }
    if (seed_option->count() > 0) config.seed = seed;
    if (samples_option->count() > 0) {
      if (samples < 100) throw ConfigError("--samples must be at least 100");
      config.samples = samples;
    }
    if (grid_option->count() > 0) {
      if (config.mode == RunMode::sweep) {
        throw ConfigError("--grid is not used by mode 'sweep' (cell grids are auto-sized)");
      }
      int nx = 0;
      int nk = 0;
      const std::size_t comma = grid_arg.find(',');
      try {
        if (comma == std::string::npos) throw std::invalid_argument("missing comma");
        nx = std::stoi(grid_arg.substr(0, comma));
        nk = std::stoi(grid_arg.substr(comma + 1));
      } catch (const std::exception&) {
        throw ConfigError("--grid must be two integers as nx,nk (got '" + grid_arg + "')");
      }
      if (nx < 8 || nk < 8) throw ConfigError("--grid counts must be at least 8");
      config.grid.nx = nx;
      config.grid.nk = nk;
    }
    if (quad_option->count() > 0) {
      if (quad_order < 4 || quad_order > 256) {
        throw ConfigError("--quad-order must be in [4, 256]");
      }
      config.quad_order = quad_order;
    }
    out_for_errors = config.out_dir;

    const auto start = std::chrono::steady_clock::now();
    RunReport report = run(config);
    const auto stop = std::chrono::steady_clock::now();
    report.wall_time_seconds = std::chrono::duration<double>(stop - start).count();

    print_report_summary(report, config);
    return 0;
  } catch (const ConfigError& error) {
    emit_error_record(2, "config_error", error.what(), out_for_errors);
    return 2;
  } catch (const SupportEscapeError& error) {
    emit_error_record(3, "support_escape", error.what(), out_for_errors);
    return 3;
  } catch (const NumericsError& error) {
    emit_error_record(3, "numerics_error", error.what(), out_for_errors);
    return 3;
  } catch (const std::exception& error) {
    emit_error_record(3, "computation_error", error.what(), out_for_errors);
    return 3;
  }
}

}  // namespace nwig
