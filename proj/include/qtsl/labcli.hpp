#pragma once

// Experiment configs, result rows and the qtsl subcommands.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtsl/arena.hpp"

namespace qtsl {

inline constexpr const char* kCsvHeader =
    "game,N,M,K,S,T,g,mode,trials,win_rate,ci_low,ci_high,exact,seed,wall_ms";
inline constexpr const char* kCurveHeader = "game,N,K,g,S,T,log_N_S,log_N_T,win_rate,frontier";
inline constexpr const char* kConfigSchema = "qtsl.experiment/1";

/// Bad or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResultRow {
  std::string game;
  std::size_t N = 0;
  std::size_t M = 0;
  std::size_t K = 1;
  std::size_t S = 0;
  std::size_t T = 0;
  std::size_t g = 1;
  std::string mode;
  std::size_t trials = 0;
  double win_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool exact = false;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  /// Guard or budget violation recorded in place of an estimate (sweeps only).
  std::string error;

  std::string to_csv() const;
};

struct ExperimentConfig {
  std::string game;
  nlohmann::json game_params = nlohmann::json::object();
  std::string adversary;
  nlohmann::json adversary_params = nlohmann::json::object();
  OracleMode mode = OracleMode::Exact;
  std::size_t g = 1;
  std::size_t S = 0;
  std::size_t T = 0;
  std::optional<std::size_t> trials;
  bool exact = false;
  std::optional<std::uint64_t> seed;
  double max_worlds = 1e6;
  std::string out;
  std::string transcripts;
  std::string curve;
  double curve_threshold = 0.5;
  /// Sweep axes; empty means "use the scalar value".
  std::vector<std::size_t> sweep_S;
  std::vector<std::size_t> sweep_T;
  std::vector<std::size_t> sweep_K;
  std::vector<std::size_t> sweep_g;
  bool has_sweep = false;
};

/// Throws ConfigError on a missing or wrong schema, unknown keys of the wrong
/// type, or an empty sweep range.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  bool exact = false;
  std::optional<std::string> out;
};

/// Runs one grid point. Transcript lines are appended when `transcripts` is set.
ResultRow run_point(const ExperimentConfig& config, std::size_t S, std::size_t T, std::size_t K, std::size_t g,
                    std::vector<nlohmann::json>* transcripts = nullptr);

/// One row per grid point plus the curve rows; guard violations become rows
/// with an error instead of aborting.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config, std::vector<nlohmann::json>* transcripts = nullptr);
std::vector<std::string> curve_rows(const std::vector<ResultRow>& rows, double threshold);

/// Each returns the process exit code (0 ok, 1 failure, 2 config error).
int cmd_verify(const std::string& filter, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& config_path, const CliOverrides& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& config_path, const CliOverrides& o, std::ostream& out, std::ostream& err);
int cmd_bound_check(const std::string& family, const std::vector<std::string>& params, std::ostream& out,
                    std::ostream& err);

struct BoundLine {
  std::string label;
  double observed = 0.0;
  double shape = 0.0;
  /// Bound with an explicit constant, when the family has one.
  std::optional<double> explicit_bound;
};

struct BoundReport {
  std::string family;
  std::vector<BoundLine> lines;
  double fitted_constant = 0.0;
  bool passed = true;
};

/// Families: owf-mis, yaobox-mis, salt-mis, prgind. Params are key=value.
BoundReport bound_check(const std::string& family, const std::vector<std::string>& params);

}  // namespace qtsl
