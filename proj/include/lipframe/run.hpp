#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipframe/frame.hpp"

namespace lipframe {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { certify, dual, similarity, orthogonality, interpolate, direct_sum, reconstruct_sweep };

std::string to_string(Command command);
/// Throws SchemaError("command") for unknown names.
Command parse_command(const std::string& text);

struct RunConfig {
  Command command = Command::certify;
  /// Fixture id ("disc:N=30", "orthopair", ...) or path of a JSON frame file.
  std::string fixture;
  std::size_t n_pairs = 10000;
  std::size_t n_probes = 64;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  SolverCfg solver;
  std::string out;
  std::string csv_out;

  bool bessel_only = false;
  /// Second frame for two-frame commands when the fixture supplies only one.
  std::string partner;
  double scale_fg = 1.0;
  double scale_tw = 1.0;
  double interp_a = 1.0;
  double interp_b = 1.0;
  double interp_c = 0.5;
  double interp_d = 0.5;
  std::vector<std::size_t> n_values{5, 10, 20, 30};
  std::size_t samples = 200;
};

/// Replaces the seed with LIPFRAME_SEED when that variable is set.
void apply_environment(RunConfig& config);

nlohmann::json config_to_json(const RunConfig& config);

struct RunReport {
  nlohmann::json config;
  nlohmann::json payload;
  double wall_time = 0.0;
  int exit_code = 0;
  std::string summary;
  /// Convergence table for reconstruct-sweep, otherwise empty.
  std::string csv;

  nlohmann::json to_json() const;
};

/// JSON linear frame {p, N, ambient_dim, scalar_field, U_matrix, V_matrix}; entries are
/// numbers or [re, im] pairs. Throws SchemaError naming the offending field.
Frame parse_frame_file(const std::string& path);
Frame parse_frame_json(const nlohmann::json& doc);

/// Fixture ids resolve through fixtures::build, anything naming an existing file
/// through parse_frame_file.
std::vector<Frame> resolve_frames(const std::string& fixture);

/// Runs one pipeline. Library errors propagate.
RunReport run(const RunConfig& config);

/// Exit status for an error escaping `run`: 2 schema, 3 precondition, 4 numerical.
int exit_code_for(const std::exception& error);

/// Runs, writes the report and CSV files, prints the summary and returns the exit status.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace lipframe
