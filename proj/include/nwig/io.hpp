#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nwig/decoherence.hpp"
#include "nwig/grid.hpp"

namespace nwig {

// Serializes a double with 17 significant decimal digits in scientific
// notation -- enough to reproduce any double exactly on parse (lossless
// round-trip), and a fixed width that keeps files byte-stable across runs.
std::string format_double(double value);

// Exact inverse of format_double (accepts any standard decimal/scientific
// spelling).  Throws DomainError if the text is not a complete number.
double parse_double(std::string_view text);

// 64-bit FNV-1a digest of a byte string, as 16 lowercase hex digits.  Used to
// fingerprint configs and output files in run reports.
std::string fnv1a64_hex(std::string_view bytes);

// --- Wigner field files -----------------------------------------------------
//
// CSV layout (comment lines first, then a column header, then data rows in
// row-major x-then-k order):
//
//   # nwig <version> config=<digest>
//   # x_unit=1e-10 m, k_unit=1e10 m^-1
//   # provenance=<compact JSON>
//   x,k,w
//   <x>,<k>,<w>
//   ...
//
// The JSON container mirrors the same content under schema "wigner-field/1".
// Both formats round-trip bit-exactly: read(write(field)) reproduces the
// grid bounds, counts, provenance, and every value to the last bit.

std::string field_to_csv(const WignerField& field, const std::string& config_digest);
WignerField field_from_csv(const std::string& text);

nlohmann::json field_to_json(const WignerField& field, const std::string& config_digest);
WignerField field_from_json(const nlohmann::json& document);

// --- Generic numeric tables (marginals, slices, deviation statistics) -------
//
// Same comment-header convention as field CSV; columns are named, all of
// equal length.
std::string table_to_csv(const std::vector<std::string>& column_names,
                         const std::vector<std::vector<double>>& columns,
                         const std::string& config_digest);

nlohmann::json table_to_json(const std::vector<std::string>& column_names,
                             const std::vector<std::vector<double>>& columns,
                             const std::string& config_digest);

// --- Sweep surfaces ----------------------------------------------------------
//
// CSV: header comments, then `delta,sigma,epsilon` rows (row-major delta then
// sigma; failed cells serialize as nan).  JSON (schema "sweep-surface/1")
// additionally carries the axes, fixed k0/delta0, per-cell grid sizes, the
// failure records, and the extrema report.
std::string sweep_to_csv(const SweepSurface& surface, const std::string& config_digest);
nlohmann::json sweep_to_json(const SweepSurface& surface, const std::vector<Extremum>& extrema,
                             const std::string& config_digest);

// --- Files -------------------------------------------------------------------

// Writes content to path (parent directories created as needed), or throws
// std::runtime_error naming the path.
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Reads a whole file, or throws std::runtime_error naming the path.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace nwig
