#include "nwig/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string_view>

#include "nwig/errors.hpp"
#include "nwig/io.hpp"

namespace nwig {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

void require_object(const json& value, const std::string& context) {
  if (!value.is_object()) fail(context + " must be a JSON object");
}

void reject_unknown_keys(const json& object, const std::string& context,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& item : object.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](std::string_view key) { return key == item.key(); });
    if (!known) fail("unknown key '" + item.key() + "' in " + context);
  }
}

double get_number(const json& object, const std::string& context, const char* key) {
  const json& value = object.at(key);
  if (!value.is_number()) fail(context + "." + key + " must be a number");
  const double number = value.get<double>();
  if (!std::isfinite(number)) fail(context + "." + key + " must be finite");
  return number;
}

double get_number_or(const json& object, const std::string& context, const char* key,
                     double fallback) {
  return object.contains(key) ? get_number(object, context, key) : fallback;
}

std::uint64_t get_unsigned(const json& object, const std::string& context, const char* key) {
  const json& value = object.at(key);
  if (!value.is_number_unsigned()) fail(context + "." + key + " must be a non-negative integer");
  return value.get<std::uint64_t>();
}

int get_count(const json& object, const std::string& context, const char* key) {
  const json& value = object.at(key);
  if (!value.is_number_integer() && !value.is_number_unsigned()) {
    fail(context + "." + key + " must be an integer");
  }
  const std::int64_t count = value.get<std::int64_t>();
  if (count < 8 || count > 1000000) fail(context + "." + key + " must be in [8, 1000000]");
  return static_cast<int>(count);
}

std::string get_string(const json& object, const std::string& context, const char* key) {
  const json& value = object.at(key);
  if (!value.is_string()) fail(context + "." + key + " must be a string");
  return value.get<std::string>();
}

StateSpec parse_state(const json& object) {
  require_object(object, "state");
  reject_unknown_keys(object, "state", {"tag", "x0", "k0", "delta", "delta0", "sigma"});
  if (!object.contains("tag")) fail("state.tag is required");

  StateSpec spec;
  const std::string tag_name = get_string(object, "state", "tag");
  const auto tag = state_tag_from_string(tag_name);
  if (!tag) {
    fail("state.tag must be one of gaussian, squashed, cat, cat_averaged (got '" + tag_name +
         "')");
  }
  spec.tag = *tag;
  spec.x0 = get_number_or(object, "state", "x0", 0.0);
  spec.k0 = get_number_or(object, "state", "k0", 0.0);
  spec.delta = get_number_or(object, "state", "delta", 1.0);
  spec.delta0 = get_number_or(object, "state", "delta0", 0.0);
  spec.sigma = get_number_or(object, "state", "sigma", 0.0);

  if (!(spec.delta > 0.0)) fail("state.delta must be > 0 (packet spread)");
  if (spec.sigma < 0.0) fail("state.sigma must be >= 0 (fluctuation width)");
  if (spec.tag == StateTag::gaussian && (spec.delta0 != 0.0 || spec.sigma != 0.0)) {
    fail("state.delta0 and state.sigma must be 0 (or omitted) for tag 'gaussian'");
  }
  if (spec.tag == StateTag::cat && spec.sigma != 0.0) {
    fail("state.sigma must be 0 (or omitted) for tag 'cat'; use 'cat_averaged' for a "
         "fluctuating separation");
  }
  return spec;
}

ExperimentConfig parse_experiment(const json& object) {
  require_object(object, "experiment");
  reject_unknown_keys(object, "experiment",
                      {"preset", "B0_tesla", "deltaB_tesla", "L_m", "k0_per_m", "delta_m"});

  ExperimentConfig cfg;
  bool have_base = false;
  if (object.contains("preset")) {
    const std::string preset = get_string(object, "experiment", "preset");
    if (preset == "badurek") {
      cfg.field_mean_B0 = 0.28e-3;       // tesla
      cfg.field_std_deltaB = 0.0;        // tesla
      cfg.region_length_L = 0.57;        // metres
      cfg.mean_wavenumber_k0 = 1.7e10;   // 1/m
      cfg.packet_spread_delta = 1.1e-10; // metres
      have_base = true;
    } else {
      fail("experiment.preset must be 'badurek' (got '" + preset + "')");
    }
  }
  // Explicit keys override preset values.
  const char* required[] = {"B0_tesla", "L_m", "k0_per_m", "delta_m"};
  if (!have_base) {
    for (const char* key : required) {
      if (!object.contains(key)) {
        fail(std::string("experiment.") + key + " is required (or use a preset)");
      }
    }
  }
  if (object.contains("B0_tesla")) cfg.field_mean_B0 = get_number(object, "experiment", "B0_tesla");
  if (object.contains("deltaB_tesla")) {
    cfg.field_std_deltaB = get_number(object, "experiment", "deltaB_tesla");
  }
  if (object.contains("L_m")) cfg.region_length_L = get_number(object, "experiment", "L_m");
  if (object.contains("k0_per_m")) cfg.mean_wavenumber_k0 = get_number(object, "experiment", "k0_per_m");
  if (object.contains("delta_m")) cfg.packet_spread_delta = get_number(object, "experiment", "delta_m");

  if (cfg.field_mean_B0 < 0.0) fail("experiment.B0_tesla must be >= 0");
  if (cfg.field_std_deltaB < 0.0) fail("experiment.deltaB_tesla must be >= 0");
  if (!(cfg.region_length_L > 0.0)) fail("experiment.L_m must be > 0");
  if (!(cfg.mean_wavenumber_k0 > 0.0)) fail("experiment.k0_per_m must be > 0");
  if (!(cfg.packet_spread_delta > 0.0)) fail("experiment.delta_m must be > 0");
  if (cfg.field_mean_B0 == 0.0 && cfg.field_std_deltaB > 0.0) {
    fail("experiment.deltaB_tesla requires a nonzero B0_tesla (the fluctuation is relative)");
  }
  return cfg;
}

GridSpec parse_grid(const json& object) {
  require_object(object, "grid");
  reject_unknown_keys(object, "grid", {"nx", "nk", "x_min", "x_max", "k_min", "k_max"});

  GridSpec spec;
  if (object.contains("nx")) spec.nx = get_count(object, "grid", "nx");
  if (object.contains("nk")) spec.nk = get_count(object, "grid", "nk");
  if (object.contains("x_min")) spec.x_min = get_number(object, "grid", "x_min");
  if (object.contains("x_max")) spec.x_max = get_number(object, "grid", "x_max");
  if (object.contains("k_min")) spec.k_min = get_number(object, "grid", "k_min");
  if (object.contains("k_max")) spec.k_max = get_number(object, "grid", "k_max");

  if (spec.x_min && spec.x_max && !(*spec.x_max > *spec.x_min)) {
    fail("grid.x_max must be greater than grid.x_min");
  }
  if (spec.k_min && spec.k_max && !(*spec.k_max > *spec.k_min)) {
    fail("grid.k_max must be greater than grid.k_min");
  }
  return spec;
}

std::vector<double> parse_axis(const json& value, const std::string& context) {
  std::vector<double> axis;
  if (value.is_array()) {
    if (value.empty()) fail(context + " must not be empty");
    for (const auto& element : value) {
      if (!element.is_number()) fail(context + " entries must be numbers");
      axis.push_back(element.get<double>());
      if (axis.size() > 1 && !(axis[axis.size() - 2] < axis.back())) {
        fail(context + " must be strictly increasing");
      }
    }
    return axis;
  }
  if (value.is_object()) {
    reject_unknown_keys(value, context, {"min", "max", "step"});
    for (const char* key : {"min", "max", "step"}) {
      if (!value.contains(key)) fail(context + "." + key + " is required in a range");
    }
    const double lo = get_number(value, context, "min");
    const double hi = get_number(value, context, "max");
    const double step = get_number(value, context, "step");
    if (!(step > 0.0)) fail(context + ".step must be > 0");
    if (!(hi >= lo)) fail(context + ".max must be >= " + context + ".min");
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) axis.push_back(lo + i * step);
    return axis;
  }
  fail(context + " must be an array of numbers or a {min, max, step} range");
}

SweepSpec parse_sweep(const json& object) {
  require_object(object, "sweep");
  reject_unknown_keys(object, "sweep", {"delta", "sigma"});
  for (const char* key : {"delta", "sigma"}) {
    if (!object.contains(key)) fail(std::string("sweep.") + key + " axis is required");
  }
  SweepSpec spec;
  spec.delta_axis = parse_axis(object.at("delta"), "sweep.delta");
  spec.sigma_axis = parse_axis(object.at("sigma"), "sweep.sigma");
  return spec;
}

FiguresSpec parse_figures(const json& value) {
  if (!value.is_array()) fail("figures must be an array of figure names");
  FiguresSpec spec;
  for (const auto& element : value) {
    if (!element.is_string()) fail("figures entries must be strings");
    const std::string name = element.get<std::string>();
    if (name == "fig1") {
      spec.fig1 = true;
    } else if (name == "fig2") {
      spec.fig2 = true;
    } else if (name == "fig3") {
      spec.fig3 = true;
    } else {
      fail("figures entries must be fig1, fig2, or fig3 (got '" + name + "')");
    }
  }
  return spec;
}

}  // namespace

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::field: return "field";
    case RunMode::marginals: return "marginals";
    case RunMode::sweep: return "sweep";
    case RunMode::experiment: return "experiment";
    case RunMode::compare_mc: return "compare-mc";
  }
  return "field";
}

const char* to_string(OutputFormat format) {
  return format == OutputFormat::json ? "json" : "csv";
}

RunConfig parse_config(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& error) {
    fail(std::string("config is not valid JSON: ") + error.what());
  }
  require_object(document, "config");
  reject_unknown_keys(document, "config",
                      {"mode", "state", "experiment", "grid", "sweep", "figures", "out",
                       "format", "seed", "samples", "quad_order"});

  RunConfig config;

  if (!document.contains("mode")) fail("config.mode is required");
  const std::string mode_name = get_string(document, "config", "mode");
  if (mode_name == "field") {
    config.mode = RunMode::field;
  } else if (mode_name == "marginals") {
    config.mode = RunMode::marginals;
  } else if (mode_name == "sweep") {
    config.mode = RunMode::sweep;
  } else if (mode_name == "experiment") {
    config.mode = RunMode::experiment;
  } else if (mode_name == "compare-mc") {
    config.mode = RunMode::compare_mc;
  } else {
    fail("config.mode must be one of field, marginals, sweep, experiment, compare-mc (got '" +
         mode_name + "')");
  }

  const bool has_state = document.contains("state");
  const bool has_experiment = document.contains("experiment");
  if (has_state == has_experiment) {
    fail("config must contain exactly one of 'state' (internal units) or 'experiment' (SI)");
  }
  if (has_state) config.state = parse_state(document.at("state"));
  if (has_experiment) config.experiment = parse_experiment(document.at("experiment"));

  if (document.contains("grid")) config.grid = parse_grid(document.at("grid"));
  if (document.contains("sweep")) config.sweep = parse_sweep(document.at("sweep"));
  if (document.contains("figures")) config.figures = parse_figures(document.at("figures"));
  if (document.contains("out")) {
    config.out_dir = get_string(document, "config", "out");
    if (config.out_dir.empty()) fail("config.out must be a non-empty path");
  }
  if (document.contains("format")) {
    const std::string format_name = get_string(document, "config", "format");
    if (format_name == "csv") {
      config.format = OutputFormat::csv;
    } else if (format_name == "json") {
      config.format = OutputFormat::json;
    } else {
      fail("config.format must be csv or json (got '" + format_name + "')");
    }
  }
  if (document.contains("seed")) config.seed = get_unsigned(document, "config", "seed");
  if (document.contains("samples")) {
    config.samples = get_unsigned(document, "config", "samples");
    if (config.samples < 100) fail("config.samples must be at least 100");
  }
  if (document.contains("quad_order")) {
    const std::uint64_t order = get_unsigned(document, "config", "quad_order");
    if (order < 4 || order > 256) fail("config.quad_order must be in [4, 256]");
    config.quad_order = static_cast<int>(order);
  }

  // Mode-dependent consistency.
  if (config.mode == RunMode::experiment && !config.experiment) {
    fail("mode 'experiment' requires an 'experiment' section, not a 'state'");
  }
  if (config.mode == RunMode::sweep) {
    if (!config.sweep) fail("mode 'sweep' requires a 'sweep' section with delta and sigma axes");
    if (config.state && config.state->tag != StateTag::cat_averaged) {
      fail("mode 'sweep' with a 'state' requires tag 'cat_averaged' (the swept family); "
           "its k0 and delta0 fix the sweep, the axes supply delta and sigma");
    }
    if (document.contains("grid")) {
      fail("'grid' is not used by mode 'sweep' (cell grids are auto-sized)");
    }
  } else if (config.sweep) {
    fail("'sweep' section is only valid for mode 'sweep'");
  }
  if (config.mode == RunMode::compare_mc) {
    if (!config.state) {
      fail("mode 'compare-mc' requires a 'state' section (internal units)");
    }
    if (config.state->tag != StateTag::squashed && config.state->tag != StateTag::cat_averaged) {
      fail("mode 'compare-mc' requires an averaged state tag (squashed or cat_averaged); "
           "pure states have no fluctuation to sample");
    }
  }
  if ((config.figures.fig1 || config.figures.fig2) && config.mode != RunMode::experiment) {
    fail("figures fig1/fig2 are only valid for mode 'experiment'");
  }
  if (config.figures.fig3 && config.mode != RunMode::sweep) {
    fail("figure fig3 is only valid for mode 'sweep'");
  }
  return config;
}

nlohmann::json serialize(const RunConfig& config) {
  json j;
  j["mode"] = to_string(config.mode);
  if (config.state) {
    const StateSpec& s = *config.state;
    j["state"] = {{"tag", to_string(s.tag)}, {"x0", s.x0},         {"k0", s.k0},
                  {"delta", s.delta},        {"delta0", s.delta0}, {"sigma", s.sigma}};
  }
  if (config.experiment) {
    const ExperimentConfig& e = *config.experiment;
    j["experiment"] = {{"B0_tesla", e.field_mean_B0},
                       {"deltaB_tesla", e.field_std_deltaB},
                       {"L_m", e.region_length_L},
                       {"k0_per_m", e.mean_wavenumber_k0},
                       {"delta_m", e.packet_spread_delta}};
  }
  json grid = json::object();
  if (config.grid.nx) grid["nx"] = *config.grid.nx;
  if (config.grid.nk) grid["nk"] = *config.grid.nk;
  if (config.grid.x_min) grid["x_min"] = *config.grid.x_min;
  if (config.grid.x_max) grid["x_max"] = *config.grid.x_max;
  if (config.grid.k_min) grid["k_min"] = *config.grid.k_min;
  if (config.grid.k_max) grid["k_max"] = *config.grid.k_max;
  // An all-default grid is omitted so the canonical form re-parses in every
  // mode (sweep rejects a 'grid' section outright).
  if (!grid.empty()) j["grid"] = grid;
  if (config.sweep) {
    j["sweep"] = {{"delta", config.sweep->delta_axis}, {"sigma", config.sweep->sigma_axis}};
  }
  json figures = json::array();
  if (config.figures.fig1) figures.push_back("fig1");
  if (config.figures.fig2) figures.push_back("fig2");
  if (config.figures.fig3) figures.push_back("fig3");
  j["figures"] = figures;
  j["out"] = config.out_dir;
  j["format"] = to_string(config.format);
  j["seed"] = config.seed;
  j["samples"] = config.samples;
  j["quad_order"] = config.quad_order;
  return j;
}

std::string config_digest(const RunConfig& config) {
  // The output directory is plumbing, not computation: the same analysis
  // written to two different directories is the same run, so "out" is
  // excluded and everything under the output root is a pure function of the
  // digested configuration.
  nlohmann::json canonical = serialize(config);
  canonical.erase("out");
  return fnv1a64_hex(canonical.dump());
}

}  // namespace nwig
