#pragma once

// Scenario configuration: flat UTF-8 `key = value` text, `#` comments,
// dotted keys. Unknown or duplicate keys are errors. README.md lists every
// key with its default.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wharm/basis.hpp"
#include "wharm/entanglement.hpp"
#include "wharm/propagator.hpp"

namespace wharm {

enum class InitialState { all_down_z, all_down_x, custom_file };

enum class Observable { entropy, entropy_norm, second_moment, participation, global_ent, sigma_x };

enum class PropagatorKind { automatic, spectral, krylov };

/// Initial state of a lambda scan: all-down along whichever axis is used for
/// measuring harmonics at that point, or always all-down along z.
enum class LambdaInitial { basis_down, z_down };

enum class ScanColumn { s_at_t, s_mean, s_std, x_std };

enum class SigmaXMode { average, site };

struct ScanAxis {
  std::string parameter;  // "field_x" or "lambda"
  std::vector<double> values;
};

struct ScenarioConfig {
  ChainSpec model{.n_sites = 10};
  InitialState initial_state = InitialState::all_down_z;
  std::string initial_state_file;
  TimeGrid time{0.0, 1.0, 0.01};
  std::vector<Observable> observables{Observable::entropy};
  std::optional<ScanAxis> scan;
  PropagatorKind propagator = PropagatorKind::automatic;
  KrylovOptions krylov;
  std::uint64_t seed = 0;
  std::string output_path;

  // scan-field
  double sample_time = 1.0;
  double window_t1 = 5.0;
  double window_t2 = 100.0;
  std::vector<ScanColumn> scan_columns{ScanColumn::s_at_t};

  // scan-lambda
  double lambda_entropy_time = 0.5;
  double lambda_ge_time = 2.0;
  LambdaInitial lambda_initial = LambdaInitial::basis_down;

  // levels
  bool resolve_symmetry = true;

  PartitionMode partition_mode = PartitionMode::all_subsets;
  SigmaXMode sigma_x_mode = SigmaXMode::average;
  int sigma_x_site = 0;
};

/// Raw entries after lexing, with the line each key came from.
struct ConfigEntries {
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
  std::string source = "<config>";

  /// Sets or replaces a key (used for command-line overrides).
  void set(const std::string& key, const std::string& value);
};

/// Throws ConfigError with `source:line` diagnostics.
ConfigEntries lex_config(std::string_view text, std::string source = "<config>");
ConfigEntries read_config_file(const std::filesystem::path& path);

/// Throws ConfigError on unknown keys or malformed values.
ScenarioConfig build_config(const ConfigEntries& entries);
ScenarioConfig parse_config(std::string_view text);

/// FNV-1a over the sorted `key=value` lines, excluding output_path.
std::uint64_t config_hash(const ConfigEntries& entries);

std::string to_string(Observable o);
std::string to_string(ScanColumn c);

}  // namespace wharm
