#include "nwig/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <system_error>

#include "nwig/errors.hpp"
#include "nwig/version.hpp"

namespace nwig {

namespace {

using nlohmann::json;

const char* kUnitsComment = "# x_unit=1e-10 m, k_unit=1e10 m^-1";

std::string version_comment(const std::string& config_digest) {
  std::string line = "# ";
  line += kToolName;
  line += ' ';
  line += kToolVersion;
  line += " config=";
  line += config_digest.empty() ? "unknown" : config_digest;
  return line;
}

json provenance_to_json(const Provenance& p) {
  json j;
  j["kind"] = p.kind;
  j["state"] = p.state;
  j["seed"] = p.seed;
  j["samples"] = p.samples;
  j["detail"] = p.detail;
  return j;
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.kind = j.at("kind").get<std::string>();
  p.state = j.at("state").get<std::string>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.samples = j.at("samples").get<std::uint64_t>();
  p.detail = j.at("detail").get<std::string>();
  return p;
}

// Splits one CSV data line into exactly `expected` comma-separated doubles.
void parse_csv_row(std::string_view line, double* out, int expected) {
  int field = 0;
  std::size_t start = 0;
  while (field < expected) {
    const std::size_t comma = line.find(',', start);
    const std::string_view token = comma == std::string_view::npos
                                       ? line.substr(start)
                                       : line.substr(start, comma - start);
    out[field++] = parse_double(token);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (field != expected) {
    throw DomainError("malformed CSV row: expected " + std::to_string(expected) +
                      " fields in '" + std::string(line) + "'");
  }
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::scientific, 16);
  return std::string(buffer, result.ptr);
}

double parse_double(std::string_view text) {
  // Tolerate surrounding spaces (hand-edited files).
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string hex(16, '0');
  for (int i = 15; i >= 0; --i) {
    hex[i] = digits[hash & 0xF];
    hash >>= 4;
  }
  return hex;
}

std::string field_to_csv(const WignerField& field, const std::string& config_digest) {
  validate(field);
  const PhaseSpaceGrid& g = field.grid;
  std::string out;
  out.reserve(field.values.size() * 72 + 256);
  out += version_comment(config_digest);
  out += '\n';
  out += kUnitsComment;
  out += '\n';
  out += "# provenance=";
  out += provenance_to_json(field.provenance).dump();
  out += '\n';
  // Exact grid bounds: the per-row x,k columns are recomputed node positions,
  // whose last node may differ from the stored bound by an ulp, so the bounds
  // travel separately to keep the round-trip bit-exact.
  out += "# grid=" + format_double(g.x_min) + ',' + format_double(g.x_max) + ',' +
         format_double(g.k_min) + ',' + format_double(g.k_max) + ',' +
         std::to_string(g.nx) + ',' + std::to_string(g.nk);
  out += '\n';
  out += "x,k,w\n";
  for (int i = 0; i < g.nx; ++i) {
    const std::string x_text = format_double(g.x(i));
    for (int j = 0; j < g.nk; ++j) {
      out += x_text;
      out += ',';
      out += format_double(g.k(j));
      out += ',';
      out += format_double(field.at(i, j));
      out += '\n';
    }
  }
  return out;
}

WignerField field_from_csv(const std::string& text) {
  Provenance provenance;
  provenance.kind = "loaded";

  std::vector<double> xs;
  std::vector<double> ks;
  std::vector<double> ws;

  bool have_grid_comment = false;
  PhaseSpaceGrid declared_grid;

  std::istringstream stream(text);
  std::string line;
  bool saw_column_header = false;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string provenance_prefix = "# provenance=";
      const std::string grid_prefix = "# grid=";
      if (line.rfind(provenance_prefix, 0) == 0) {
        provenance = provenance_from_json(json::parse(line.substr(provenance_prefix.size())));
      } else if (line.rfind(grid_prefix, 0) == 0) {
        double bounds[6];
        parse_csv_row(std::string_view(line).substr(grid_prefix.size()), bounds, 6);
        declared_grid.x_min = bounds[0];
        declared_grid.x_max = bounds[1];
        declared_grid.k_min = bounds[2];
        declared_grid.k_max = bounds[3];
        declared_grid.nx = static_cast<int>(bounds[4]);
        declared_grid.nk = static_cast<int>(bounds[5]);
        have_grid_comment = true;
      }
      continue;
    }
    if (!saw_column_header) {
      if (line != "x,k,w") throw DomainError("field CSV column header must be 'x,k,w'");
      saw_column_header = true;
      continue;
    }
    double row[3];
    parse_csv_row(line, row, 3);
    xs.push_back(row[0]);
    ks.push_back(row[1]);
    ws.push_back(row[2]);
  }
  if (ws.size() < 64) throw DomainError("field CSV has too few data rows");

  WignerField field;
  if (have_grid_comment) {
    field.grid = declared_grid;
    if (ws.size() != static_cast<std::size_t>(field.grid.nx) * field.grid.nk) {
      throw DomainError("field CSV row count does not match its declared grid");
    }
  } else {
    // No grid comment (hand-made file): reconstruct the lattice from the data
    // rows.  Row-major x-then-k means the leading rows share the first x
    // value; their count is nk.
    std::size_t nk = 1;
    while (nk < xs.size() && xs[nk] == xs[0]) ++nk;
    if (nk < 8 || ws.size() % nk != 0) {
      throw DomainError("field CSV rows do not form a rectangular row-major grid");
    }
    field.grid.nx = static_cast<int>(ws.size() / nk);
    field.grid.nk = static_cast<int>(nk);
    field.grid.x_min = xs.front();
    field.grid.x_max = xs.back();
    field.grid.k_min = ks.front();
    field.grid.k_max = ks[nk - 1];
  }
  field.values = std::move(ws);
  field.provenance = std::move(provenance);
  validate(field);
  return field;
}

nlohmann::json field_to_json(const WignerField& field, const std::string& config_digest) {
  validate(field);
  json j;
  j["schema"] = "wigner-field/1";
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion},
               {"config_digest", config_digest.empty() ? "unknown" : config_digest}};
  j["units"] = {{"x_unit", "1e-10 m"}, {"k_unit", "1e10 m^-1"}};
  j["grid"] = {{"x_min", field.grid.x_min}, {"x_max", field.grid.x_max},
               {"k_min", field.grid.k_min}, {"k_max", field.grid.k_max},
               {"nx", field.grid.nx},       {"nk", field.grid.nk}};
  j["provenance"] = provenance_to_json(field.provenance);
  j["values"] = field.values;
  return j;
}

WignerField field_from_json(const nlohmann::json& document) {
  if (document.at("schema").get<std::string>() != "wigner-field/1") {
    throw DomainError("unsupported field schema: " +
                      document.at("schema").get<std::string>());
  }
  WignerField field;
  const json& g = document.at("grid");
  field.grid.x_min = g.at("x_min").get<double>();
  field.grid.x_max = g.at("x_max").get<double>();
  field.grid.k_min = g.at("k_min").get<double>();
  field.grid.k_max = g.at("k_max").get<double>();
  field.grid.nx = g.at("nx").get<int>();
  field.grid.nk = g.at("nk").get<int>();
  field.provenance = provenance_from_json(document.at("provenance"));
  field.values = document.at("values").get<std::vector<double>>();
  validate(field);
  return field;
}

std::string table_to_csv(const std::vector<std::string>& column_names,
                         const std::vector<std::vector<double>>& columns,
                         const std::string& config_digest) {
  if (column_names.empty() || column_names.size() != columns.size()) {
    throw DomainError("table requires one name per column");
  }
  const std::size_t rows = columns.front().size();
  for (const auto& column : columns) {
    if (column.size() != rows) throw DomainError("table columns must have equal length");
  }
  std::string out;
  out += version_comment(config_digest);
  out += '\n';
  out += kUnitsComment;
  out += '\n';
  for (std::size_t c = 0; c < column_names.size(); ++c) {
    if (c) out += ',';
    out += column_names[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += format_double(columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json table_to_json(const std::vector<std::string>& column_names,
                             const std::vector<std::vector<double>>& columns,
                             const std::string& config_digest) {
  if (column_names.empty() || column_names.size() != columns.size()) {
    throw DomainError("table requires one name per column");
  }
  json data;
  for (std::size_t c = 0; c < column_names.size(); ++c) {
    data[column_names[c]] = columns[c];
  }
  json j;
  j["schema"] = "table/1";
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion},
               {"config_digest", config_digest.empty() ? "unknown" : config_digest}};
  j["units"] = {{"x_unit", "1e-10 m"}, {"k_unit", "1e10 m^-1"}};
  j["columns"] = column_names;
  j["data"] = data;
  return j;
}

std::string sweep_to_csv(const SweepSurface& surface, const std::string& config_digest) {
  std::string out;
  out += version_comment(config_digest);
  out += '\n';
  out += kUnitsComment;
  out += '\n';
  out += "# k0=" + format_double(surface.k0) + " delta0=" + format_double(surface.delta0);
  out += '\n';
  out += "delta,sigma,epsilon\n";
  const std::size_t nsigma = surface.sigma_axis.size();
  for (std::size_t i = 0; i < surface.delta_axis.size(); ++i) {
    for (std::size_t j = 0; j < nsigma; ++j) {
      out += format_double(surface.delta_axis[i]);
      out += ',';
      out += format_double(surface.sigma_axis[j]);
      out += ',';
      out += format_double(surface.epsilon[i * nsigma + j]);
      out += '\n';
    }
  }
  return out;
}

nlohmann::json sweep_to_json(const SweepSurface& surface, const std::vector<Extremum>& extrema,
                             const std::string& config_digest) {
  json j;
  j["schema"] = "sweep-surface/1";
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion},
               {"config_digest", config_digest.empty() ? "unknown" : config_digest}};
  j["units"] = {{"x_unit", "1e-10 m"}, {"k_unit", "1e10 m^-1"}};
  j["delta_axis"] = surface.delta_axis;
  j["sigma_axis"] = surface.sigma_axis;
  j["fixed"] = {{"k0", surface.k0}, {"delta0", surface.delta0}};
  j["epsilon"] = surface.epsilon;  // row-major delta then sigma; NaN -> null
  j["cell_nx"] = surface.cell_nx;
  j["cell_nk"] = surface.cell_nk;
  json failures = json::array();
  for (const auto& failure : surface.failures) {
    failures.push_back({{"delta_index", failure.delta_index},
                        {"sigma_index", failure.sigma_index},
                        {"message", failure.message}});
  }
  j["failures"] = failures;
  json extrema_json = json::array();
  for (const auto& extremum : extrema) {
    extrema_json.push_back({{"delta", extremum.delta},
                            {"sigma", extremum.sigma},
                            {"kind", to_string(extremum.kind)}});
  }
  j["extrema"] = extrema_json;
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create directory " + path.parent_path().string() +
                               ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::runtime_error("read failed for " + path.string());
  return buffer.str();
}

}  // namespace nwig
