#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmp/dual_functionals.hpp"
#include "dmp/measures.hpp"
#include "dmp/solver.hpp"

namespace dmp::io {

// Every parser throws ValidationError whose field() is the JSON path of the
// first offending value, e.g. "pairs[3].weight".

/// {"type":"polytope","normals":[[...]],"support":[...]}
/// {"type":"ellipsoid","axes":[[...]],"semiaxes":[...]}
/// {"type":"barrier","k":k,"params":[...],"axes":[[...]]}
/// {"type":"cylinder","k":k,"semiaxes":[...],"axes":[[...]]}
/// Rows are vectors; axes default to the identity. Ellipsoid semiaxes may
/// come in any order.
Body parse_body(std::string_view text);
std::string body_to_json(const Body& body);

/// {"n":n,"pairs":[{"dir":[...],"weight":w},...]}. Directions are
/// normalized, made canonical and merged.
DiscreteEvenMeasure parse_measure(std::string_view text);
std::string measure_to_json(const DiscreteEvenMeasure& mu);
/// Measure format plus "q", "total" and "method"; zero pairs are dropped.
std::string curvature_to_json(const CurvatureMeasure& c);

/// {"normals":[[...],...]}; rows are normalized.
std::vector<UnitVector> parse_normals(std::string_view text);

/// Body (body format), c, residual, status, iterations, gradient norm and
/// the gate margin. The phi trace goes to a CSV sidecar.
std::string solve_result_to_json(const SolveResult& r);
std::string phi_trace_csv(const SolveResult& r);

/// "product:RES", "mc:COUNT[:SEED]" or "default:RES".
struct GridSpec
{
  std::string text = "default:128";
  std::optional<GridScheme> scheme;  ///< empty means build_default_grid
  int resolution = 128;
  std::optional<std::uint64_t> seed;
};
GridSpec parse_grid_spec(std::string_view text);
SphericalGrid make_grid(const GridSpec& spec, int n);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex(std::uint64_t value);
/// FNV-1a of the file contents as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

struct RunManifest
{
  std::string command;
  std::string tool_version;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> input_hashes;  ///< path -> file_hash
  std::vector<std::uint64_t> seeds;
  int threads = 0;
  double wall_clock_seconds = 0.0;
  std::string timestamp;  ///< UTC, ISO 8601
};

/// Hash of everything except wall clock and timestamp, so equal runs share it.
std::string manifest_hash(const RunManifest& m);
std::string manifest_to_json(const RunManifest& m);

} // namespace dmp::io
