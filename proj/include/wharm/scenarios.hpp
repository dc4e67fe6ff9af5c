#pragma once

// Scenario drivers: each turns a ScenarioConfig into a CSV table.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wharm/config.hpp"

namespace wharm {

/// Build version, `git describe` style.
const char* tool_version();

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  /// Extra `key=value` fields appended to the first comment line.
  std::vector<std::pair<std::string, std::string>> metadata;
  /// Non-fatal diagnostics for the caller to report (not written to CSV).
  std::vector<std::string> warnings;

  std::size_t column(const std::string& name) const;  // throws if absent
};

/// %.17g.
std::string format_real(double v);

/// Writes `# tool=wharm version=... config_hash=<hex> [metadata...]`, the
/// column header, then the rows.
void write_csv(const CsvTable& table, std::uint64_t config_hash, std::ostream& out);
void write_csv(const CsvTable& table, std::uint64_t config_hash, const std::filesystem::path& path);

struct ParsedCsv {
  std::string first_line;
  std::uint64_t config_hash = 0;
  CsvTable table;
};
ParsedCsv read_csv(const std::filesystem::path& path);

/// Amplitudes of the configured initial state in the z basis.
Eigen::VectorXcd initial_amplitudes(const ScenarioConfig& config);

/// Propagator actually used for a chain (auto resolves by chain length).
PropagatorKind resolve_propagator(PropagatorKind requested, int n_sites);

/// Evaluates Psi(t) at ascending `times` and hands each state (z basis) to
/// `visit(index, amplitudes)`. Visits may run concurrently for distinct
/// indices.
void sample_trajectory(const ChainSpec& spec, const Eigen::VectorXcd& psi0,
                       std::span<const double> times, PropagatorKind kind,
                       const KrylovOptions& krylov,
                       const std::function<void(std::size_t, const Eigen::VectorXcd&)>& visit);

/// Test hook: when set, every state produced by sample_trajectory is passed
/// to the observer as well (possibly from several threads at once).
using TrajectoryObserver = std::function<void(const ChainSpec&, double, const Eigen::VectorXcd&)>;
void set_trajectory_observer(TrajectoryObserver observer);

/// Column names and values of the configured observables for one state.
class ObservableEvaluator {
 public:
  explicit ObservableEvaluator(const ScenarioConfig& config);

  const std::vector<std::string>& columns() const { return columns_; }
  std::vector<double> operator()(const Eigen::VectorXcd& psi_z) const;

 private:
  const ScenarioConfig* config_;
  std::vector<std::string> columns_;
  std::optional<ParticipationEvaluator> participation_;
};

/// Measurement-basis amplitudes: the input for quant_axis z, rotated for x.
Eigen::VectorXcd in_measurement_basis(const Eigen::VectorXcd& psi_z, int n_sites, QuantAxis axis);

/// Wigner-harmonic entropy of a z-basis state measured along `axis`.
double entropy_along(const Eigen::VectorXcd& psi_z, int n_sites, QuantAxis axis);

/// One row per sample time: `t` followed by the observable columns.
CsvTable run_evolution(const ScenarioConfig& config);

/// One row per h_x of the scan axis: `field_x` followed by S_at_t, S_mean,
/// S_std and X_std as selected by scan.columns.
CsvTable scan_transverse_field(const ScenarioConfig& config);

/// Transverse-field Ising lambda = h_x / (J + h_x) scan; harmonics are
/// measured along z for lambda <= 1/2 and along x above.
CsvTable scan_lambda(const ScenarioConfig& config);

/// Mean spacing ratio per h_x of the scan axis or for the single model point.
CsvTable diagnose_levels(const ScenarioConfig& config);

enum class ScenarioKind { evolve, scan_field, scan_lambda, levels };

/// Guesses the producing scenario from a CSV header.
ScenarioKind infer_scenario(const CsvTable& table);

struct CheckReport {
  std::vector<std::size_t> rows_checked;
  double max_deviation = 0.0;  // max |a - b| / max(1, |a|)
  bool hash_matches = false;
  bool ok = false;
};

/// Recomputes up to `n_rows` randomly chosen rows of an existing CSV (seeded
/// by config.seed) and compares every numeric cell within `tolerance`.
CheckReport check_csv(const ScenarioConfig& config, const ConfigEntries& entries,
                      const std::filesystem::path& csv_path, std::size_t n_rows = 3,
                      double tolerance = 1e-9);

/// Worker count for parallel drivers (WHARM_THREADS overrides the default).
void set_thread_count(int threads);
int thread_count();

}  // namespace wharm
