#include "wharm/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <omp.h>

#include "wharm/complexity.hpp"
#include "wharm/entanglement.hpp"
#include "wharm/errors.hpp"
#include "wharm/hamiltonian.hpp"
#include "wharm/timeseries.hpp"

#ifndef WHARM_VERSION
#define WHARM_VERSION "0.1.0"
#endif

namespace wharm {

namespace {

constexpr std::size_t kTimeBatch = 64;

int default_threads() {
  if (const char* env = std::getenv("WHARM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

int g_threads = default_threads();

std::mutex g_observer_mutex;
TrajectoryObserver g_observer;

TrajectoryObserver current_observer() {
  std::lock_guard lock(g_observer_mutex);
  return g_observer;
}

template <class F>
void parallel_for(std::size_t count, F&& f) {
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(g_threads) if (g_threads > 1 && count > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) f(static_cast<std::size_t>(i));
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const char* tool_version() { return WHARM_VERSION; }

void set_thread_count(int threads) {
  if (threads < 1) throw ConfigError("thread count must be >= 1");
  g_threads = threads;
}

int thread_count() { return g_threads; }

void set_trajectory_observer(TrajectoryObserver observer) {
  std::lock_guard lock(g_observer_mutex);
  g_observer = std::move(observer);
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range(fmt::format("no column '{}'", name));
  return static_cast<std::size_t>(it - columns.begin());
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void write_csv(const CsvTable& table, std::uint64_t hash, std::ostream& out) {
  out << fmt::format("# tool=wharm version={} config_hash={:016x}", tool_version(), hash);
  for (const auto& [k, v] : table.metadata) out << ' ' << k << '=' << v;
  out << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void write_csv(const CsvTable& table, std::uint64_t hash, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  write_csv(table, hash, out);
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

ParsedCsv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  ParsedCsv p;
  std::string line;
  if (!std::getline(in, p.first_line) || !p.first_line.starts_with("# tool=")) {
    throw IoError(fmt::format("'{}' has no tool header line", path.string()));
  }
  const auto pos = p.first_line.find("config_hash=");
  if (pos == std::string::npos) throw IoError("CSV header has no config_hash");
  const auto hex = p.first_line.substr(pos + 12, 16);
  std::from_chars(hex.data(), hex.data() + hex.size(), p.config_hash, 16);
  if (!std::getline(in, line)) throw IoError("CSV has no column header");
  p.table.columns = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    p.table.rows.push_back(split_csv_line(line));
  }
  return p;
}

Eigen::VectorXcd initial_amplitudes(const ScenarioConfig& config) {
  const int n = config.model.n_sites;
  switch (config.initial_state) {
    case InitialState::all_down_z:
      return all_down_state(n, config.model.site_cap).amplitudes();
    case InitialState::all_down_x:
      return rotate_axis(all_down_state(n, config.model.site_cap)).amplitudes();
    case InitialState::custom_file: {
      std::ifstream in(config.initial_state_file);
      if (!in) throw IoError(fmt::format("cannot open initial state '{}'", config.initial_state_file));
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
      std::string line;
      Eigen::Index k = 0;
      int line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        double re = 0.0;
        if (!(ls >> re)) continue;
        double im = 0.0;
        ls >> im;
        if (k >= v.size()) {
          throw ConfigError(fmt::format("{}:{}: more than 2^{} amplitudes",
                                        config.initial_state_file, line_no, n));
        }
        v[k++] = complex(re, im);
      }
      if (k != v.size()) {
        throw ConfigError(fmt::format("{}: expected {} amplitudes, found {}",
                                      config.initial_state_file, v.size(), k));
      }
      if (std::abs(v.norm() - 1.0) > 1e-6) {
        throw ConfigError(fmt::format("{}: state norm {:.9g} is not 1",
                                      config.initial_state_file, v.norm()));
      }
      return PureState::normalized(n, std::move(v)).amplitudes();
    }
  }
  throw ConfigError("unknown initial state");
}

PropagatorKind resolve_propagator(PropagatorKind requested, int n_sites) {
  if (requested != PropagatorKind::automatic) return requested;
  return n_sites <= 12 ? PropagatorKind::spectral : PropagatorKind::krylov;
}

void sample_trajectory(const ChainSpec& spec, const Eigen::VectorXcd& psi0,
                       std::span<const double> times, PropagatorKind kind,
                       const KrylovOptions& krylov,
                       const std::function<void(std::size_t, const Eigen::VectorXcd&)>& visit) {
  spec.validate();
  if (!std::is_sorted(times.begin(), times.end())) {
    throw std::invalid_argument("sample times must be ascending");
  }
  const auto observer = current_observer();
  auto deliver = [&](std::size_t index, const Eigen::VectorXcd& psi) {
    if (observer) observer(spec, times[index], psi);
    visit(index, psi);
  };

  if (resolve_propagator(kind, spec.n_sites) == PropagatorKind::spectral) {
    const SpectralDecomposition decomp = spectral_decompose(spec);
    const SpectralEvolver evolver(decomp, PureState(spec.n_sites, psi0));
    for (std::size_t start = 0; start < times.size(); start += kTimeBatch) {
      const std::size_t count = std::min(kTimeBatch, times.size() - start);
      const Eigen::MatrixXcd states = evolver.states_at(times.subspan(start, count));
      parallel_for(count, [&](std::size_t k) {
        const Eigen::VectorXcd psi = states.col(static_cast<Eigen::Index>(k));
        deliver(start + k, psi);
      });
    }
    return;
  }

  const KrylovPropagator propagator(spec, krylov);
  Eigen::VectorXcd current = psi0;
  double current_t = 0.0;
  std::vector<Eigen::VectorXcd> batch;
  for (std::size_t start = 0; start < times.size(); start += kTimeBatch) {
    const std::size_t count = std::min(kTimeBatch, times.size() - start);
    batch.clear();
    for (std::size_t k = 0; k < count; ++k) {
      const double t = times[start + k];
      if (t != current_t) propagator.advance(current, t - current_t);
      current_t = t;
      batch.push_back(current);
    }
    parallel_for(count, [&](std::size_t k) { deliver(start + k, batch[k]); });
  }
}

Eigen::VectorXcd in_measurement_basis(const Eigen::VectorXcd& psi_z, int n_sites, QuantAxis axis) {
  if (axis == QuantAxis::z) return psi_z;
  Eigen::VectorXcd v = psi_z;
  rotate_axis_inplace(v, n_sites);
  return v;
}

double entropy_along(const Eigen::VectorXcd& psi_z, int n_sites, QuantAxis axis) {
  return wigner_entropy(harmonics_from_amplitudes(n_sites, in_measurement_basis(psi_z, n_sites, axis)));
}

ObservableEvaluator::ObservableEvaluator(const ScenarioConfig& config) : config_(&config) {
  for (auto o : config.observables) {
    columns_.push_back(to_string(o));
    if (o == Observable::participation) {
      columns_.push_back("participation_var");
      participation_.emplace(config.model.n_sites, config.partition_mode);
    }
  }
}

std::vector<double> ObservableEvaluator::operator()(const Eigen::VectorXcd& psi_z) const {
  const ScenarioConfig& c = *config_;
  const int n = c.model.n_sites;
  std::optional<HarmonicsDistribution> dist;
  auto harmonics = [&]() -> const HarmonicsDistribution& {
    if (!dist) dist.emplace(harmonics_from_amplitudes(n, in_measurement_basis(psi_z, n, c.model.quant_axis)));
    return *dist;
  };
  std::vector<double> out;
  for (auto o : c.observables) {
    switch (o) {
      case Observable::entropy:
        out.push_back(wigner_entropy(harmonics()));
        break;
      case Observable::entropy_norm:
        out.push_back(normalized_entropy(harmonics()));
        break;
      case Observable::second_moment:
        out.push_back(second_moment(harmonics()));
        break;
      case Observable::participation: {
        const auto st = (*participation_)(psi_z);
        out.push_back(st.mean);
        out.push_back(st.variance);
        break;
      }
      case Observable::global_ent:
        out.push_back(global_entanglement(psi_z, n));
        break;
      case Observable::sigma_x:
        out.push_back(c.sigma_x_mode == SigmaXMode::average ? sigma_x_mean(psi_z, n)
                                                            : sigma_x_site(psi_z, n, c.sigma_x_site));
        break;
    }
  }
  return out;
}

namespace {

std::vector<std::vector<std::string>> evolution_rows(const ScenarioConfig& config,
                                                     std::span<const double> times) {
  const ObservableEvaluator eval(config);
  std::vector<std::vector<std::string>> rows(times.size());
  sample_trajectory(config.model, initial_amplitudes(config), times, config.propagator, config.krylov,
                    [&](std::size_t i, const Eigen::VectorXcd& psi) {
                      std::vector<std::string> row{format_real(times[i])};
                      for (double v : eval(psi)) row.push_back(format_real(v));
                      rows[i] = std::move(row);
                    });
  return rows;
}

std::vector<std::string> field_scan_columns(const ScenarioConfig& config) {
  std::vector<std::string> cols{"field_x"};
  for (auto c : config.scan_columns) {
    switch (c) {
      case ScanColumn::s_at_t: cols.push_back("S_at_t"); break;
      case ScanColumn::s_mean: cols.push_back("S_mean"); break;
      case ScanColumn::s_std: cols.push_back("S_std"); break;
      case ScanColumn::x_std: cols.push_back("X_std"); break;
    }
  }
  return cols;
}

std::vector<std::string> field_scan_row(const ScenarioConfig& config, double field_x) {
  ChainSpec spec = config.model;
  spec.field_x = field_x;
  const int n = spec.n_sites;
  const bool wants_window =
      std::any_of(config.scan_columns.begin(), config.scan_columns.end(),
                  [](ScanColumn c) { return c != ScanColumn::s_at_t; });
  const bool wants_point =
      std::find(config.scan_columns.begin(), config.scan_columns.end(), ScanColumn::s_at_t) !=
      config.scan_columns.end();

  std::vector<double> times;
  if (wants_window) {
    times = TimeGrid{config.window_t1, config.window_t2, config.time.dt}.samples();
  }
  std::size_t point_index = times.size();
  bool point_inserted = false;
  if (wants_point) {
    const auto it = std::find_if(times.begin(), times.end(), [&](double t) {
      return std::abs(t - config.sample_time) <= 1e-12;
    });
    if (it != times.end()) {
      point_index = static_cast<std::size_t>(it - times.begin());
    } else {
      times.push_back(config.sample_time);
      std::sort(times.begin(), times.end());
      point_inserted = true;
      point_index = static_cast<std::size_t>(
          std::find(times.begin(), times.end(), config.sample_time) - times.begin());
    }
  }

  std::vector<double> entropy(times.size());
  std::vector<double> sx(times.size());
  sample_trajectory(spec, initial_amplitudes(config), times, config.propagator, config.krylov,
                    [&](std::size_t i, const Eigen::VectorXcd& psi) {
                      entropy[i] = entropy_along(psi, n, spec.quant_axis);
                      if (wants_window) {
                        sx[i] = config.sigma_x_mode == SigmaXMode::average
                                    ? sigma_x_mean(psi, n)
                                    : sigma_x_site(psi, n, config.sigma_x_site);
                      }
                    });

  std::optional<WindowStats> s_stats;
  std::optional<WindowStats> x_stats;
  if (wants_window) {
    // Statistics use the uniform window grid only, never an inserted sample point.
    std::vector<double> wt;
    std::vector<double> ws;
    std::vector<double> wx;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (point_inserted && i == point_index) continue;
      wt.push_back(times[i]);
      ws.push_back(entropy[i]);
      wx.push_back(sx[i]);
    }
    s_stats = window_stats(TimeSeries(wt, ws, "S"), config.window_t1, config.window_t2);
    x_stats = window_stats(TimeSeries(wt, wx, "X"), config.window_t1, config.window_t2);
  }
  std::vector<std::string> row{format_real(field_x)};
  for (auto c : config.scan_columns) {
    switch (c) {
      case ScanColumn::s_at_t: row.push_back(format_real(entropy[point_index])); break;
      case ScanColumn::s_mean: row.push_back(format_real(s_stats->mean)); break;
      case ScanColumn::s_std: row.push_back(format_real(s_stats->stddev)); break;
      case ScanColumn::x_std: row.push_back(format_real(x_stats->stddev)); break;
    }
  }
  return row;
}

std::vector<double> lambda_values(const ScenarioConfig& config) {
  if (config.scan && config.scan->parameter == "lambda") return config.scan->values;
  if (config.scan) throw ConfigError("scan-lambda needs scan.parameter = lambda");
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
  return grid;
}

struct LambdaPoint {
  double lambda = 0.0;
  double field_x = 0.0;
  QuantAxis basis = QuantAxis::z;
  double entropy_norm = 0.0;
  double global_ent = 0.0;
};

LambdaPoint lambda_point(const ScenarioConfig& config, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw ConfigError(fmt::format("lambda = {} outside (0, 1)", lambda));
  }
  LambdaPoint p;
  p.lambda = lambda;
  p.field_x = config.model.coupling * lambda / (1.0 - lambda);
  p.basis = lambda <= 0.5 + 1e-12 ? QuantAxis::z : QuantAxis::x;
  ChainSpec spec = config.model;
  spec.field_x = p.field_x;
  spec.quant_axis = p.basis;
  const int n = spec.n_sites;

  Eigen::VectorXcd psi0 = all_down_state(n, spec.site_cap).amplitudes();
  if (config.lambda_initial == LambdaInitial::basis_down && p.basis == QuantAxis::x) {
    rotate_axis_inplace(psi0, n);
  }
  const bool entropy_first = config.lambda_entropy_time <= config.lambda_ge_time;
  const std::vector<double> times =
      entropy_first ? std::vector<double>{config.lambda_entropy_time, config.lambda_ge_time}
                    : std::vector<double>{config.lambda_ge_time, config.lambda_entropy_time};
  sample_trajectory(spec, psi0, times, config.propagator, config.krylov,
                    [&](std::size_t i, const Eigen::VectorXcd& psi) {
                      const bool is_entropy = (i == 0) == entropy_first;
                      if (is_entropy) {
                        p.entropy_norm = normalized_entropy(
                            harmonics_from_amplitudes(n, in_measurement_basis(psi, n, p.basis)));
                      }
                      if (!is_entropy || times[0] == times[1]) {
                        p.global_ent = global_entanglement(psi, n);
                      }
                    });
  return p;
}

std::vector<std::string> lambda_row(const LambdaPoint& p) {
  return {format_real(p.lambda), format_real(p.field_x), p.basis == QuantAxis::z ? "z" : "x",
          format_real(p.entropy_norm), format_real(p.global_ent)};
}

std::size_t argmax_of(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_levels_size(const ScenarioConfig& config) {
  if (config.model.n_sites > 12) {
    throw SizeError(fmt::format("levels needs n_sites <= 12, got {}", config.model.n_sites));
  }
}

std::vector<double> level_fields(const ScenarioConfig& config) {
  if (config.scan && config.scan->parameter != "field_x") {
    throw ConfigError("levels scans need scan.parameter = field_x");
  }
  return config.scan ? config.scan->values : std::vector<double>{config.model.field_x};
}

std::vector<std::string> levels_row(const ScenarioConfig& config, double field_x,
                                    std::vector<std::string>* warnings) {
  ChainSpec spec = config.model;
  spec.field_x = field_x;
  const auto resolution =
      config.resolve_symmetry ? SymmetryResolution::resolve : SymmetryResolution::none;
  std::vector<std::string> row{format_real(field_x), format_real(spec.field_z)};
  try {
    const SpacingRatioResult r = spacing_ratio(spec, resolution);
    std::string status = "ok";
    if (r.degenerate()) {
      status = "degenerate";
      if (warnings) {
        warnings->push_back(fmt::format(
            "h_x = {}: spectrum is degenerate ({:.0f}% zero spacings); ratios ill-defined",
            field_x, 100.0 * r.degenerate_fraction));
      }
    } else if (!r.symmetry_resolved) {
      status = "unresolved";
      if (warnings) {
        warnings->push_back(fmt::format(
            "h_x = {}: symmetry sectors not resolved; ratio is biased toward Poisson", field_x));
      }
    }
    row.insert(row.end(), {std::to_string(r.sector_dim), std::to_string(r.n_levels),
                           format_real(r.mean_ratio), format_real(r.degenerate_fraction), status});
  } catch (const NumericError& e) {
    if (warnings) warnings->push_back(fmt::format("h_x = {}: {}", field_x, e.what()));
    row.insert(row.end(), {"0", "0", "nan", "nan", "insufficient"});
  }
  return row;
}

}  // namespace

CsvTable run_evolution(const ScenarioConfig& config) {
  CsvTable table;
  table.columns.push_back("t");
  const ObservableEvaluator eval(config);
  table.columns.insert(table.columns.end(), eval.columns().begin(), eval.columns().end());
  table.metadata.emplace_back("units", "hbar=J=1");
  const auto times = config.time.samples();
  table.rows = evolution_rows(config, times);
  return table;
}

CsvTable scan_transverse_field(const ScenarioConfig& config) {
  if (!config.scan || config.scan->parameter != "field_x") {
    throw ConfigError("scan-field needs scan.parameter = field_x");
  }
  if (config.scan_columns.empty()) throw ConfigError("scan.columns is empty");
  CsvTable table;
  table.columns = field_scan_columns(config);
  for (double hx : config.scan->values) table.rows.push_back(field_scan_row(config, hx));
  return table;
}

CsvTable scan_lambda(const ScenarioConfig& config) {
  if (config.model.field_z != 0.0) throw ConfigError("scan-lambda needs model.field_z = 0");
  CsvTable table;
  table.columns = {"lambda",    "field_x",    "basis", "entropy_norm", "global_ent",
                   "argmax_entropy_norm", "argmax_global_ent"};
  std::vector<LambdaPoint> points;
  for (double l : lambda_values(config)) points.push_back(lambda_point(config, l));
  std::vector<double> s;
  std::vector<double> ge;
  for (const auto& p : points) {
    s.push_back(p.entropy_norm);
    ge.push_back(p.global_ent);
  }
  const std::size_t sa = argmax_of(s);
  const std::size_t ga = argmax_of(ge);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto row = lambda_row(points[i]);
    row.push_back(i == sa ? "1" : "0");
    row.push_back(i == ga ? "1" : "0");
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable diagnose_levels(const ScenarioConfig& config) {
  check_levels_size(config);
  CsvTable table;
  table.columns = {"field_x", "field_z", "sector_dim", "n_levels",
                   "mean_ratio", "zero_spacing_fraction", "status"};
  table.metadata = {{"poisson_ref", format_real(kPoissonSpacingRatio)},
                    {"goe_ref", format_real(kGoeSpacingRatio)}};
  for (double hx : level_fields(config)) table.rows.push_back(levels_row(config, hx, &table.warnings));
  return table;
}

ScenarioKind infer_scenario(const CsvTable& table) {
  if (table.columns.empty()) throw IoError("CSV has no columns");
  const auto& first = table.columns.front();
  if (first == "t") return ScenarioKind::evolve;
  if (first == "lambda") return ScenarioKind::scan_lambda;
  if (first == "field_x") {
    const bool levels = std::find(table.columns.begin(), table.columns.end(), "mean_ratio") !=
                        table.columns.end();
    return levels ? ScenarioKind::levels : ScenarioKind::scan_field;
  }
  throw IoError(fmt::format("cannot infer scenario from column '{}'", first));
}

CheckReport check_csv(const ScenarioConfig& config, const ConfigEntries& entries,
                      const std::filesystem::path& csv_path, std::size_t n_rows, double tolerance) {
  const ParsedCsv parsed = read_csv(csv_path);
  const CsvTable& table = parsed.table;
  CheckReport report;
  report.hash_matches = parsed.config_hash == config_hash(entries);
  if (!report.hash_matches) {
    throw ConfigError(fmt::format("'{}' was produced by a different config (hash {:016x}, config {:016x})",
                                  csv_path.string(), parsed.config_hash, config_hash(entries)));
  }
  const ScenarioKind kind = infer_scenario(table);
  const std::size_t total = table.rows.size();

  std::size_t expected = 0;
  switch (kind) {
    case ScenarioKind::evolve: expected = config.time.samples().size(); break;
    case ScenarioKind::scan_field:
      if (!config.scan) throw ConfigError("config has no scan axis");
      expected = config.scan->values.size();
      break;
    case ScenarioKind::scan_lambda: expected = lambda_values(config).size(); break;
    case ScenarioKind::levels: expected = level_fields(config).size(); break;
  }
  if (total != expected) {
    throw NumericError(fmt::format("CSV has {} rows, config implies {}", total, expected));
  }

  std::vector<std::size_t> picks(total);
  for (std::size_t i = 0; i < total; ++i) picks[i] = i;
  std::mt19937_64 rng(config.seed);
  std::shuffle(picks.begin(), picks.end(), rng);
  picks.resize(std::min(n_rows, total));
  std::sort(picks.begin(), picks.end());
  report.rows_checked = picks;

  std::vector<std::vector<std::string>> fresh;
  switch (kind) {
    case ScenarioKind::evolve: {
      const auto grid = config.time.samples();
      std::vector<double> times;
      for (auto i : picks) times.push_back(grid[i]);
      fresh = evolution_rows(config, times);
      break;
    }
    case ScenarioKind::scan_field:
      for (auto i : picks) fresh.push_back(field_scan_row(config, config.scan->values[i]));
      break;
    case ScenarioKind::scan_lambda: {
      const auto lambdas = lambda_values(config);
      for (auto i : picks) fresh.push_back(lambda_row(lambda_point(config, lambdas[i])));
      break;
    }
    case ScenarioKind::levels: {
      const auto fields = level_fields(config);
      for (auto i : picks) fresh.push_back(levels_row(config, fields[i], nullptr));
      break;
    }
  }

  bool ok = true;
  for (std::size_t k = 0; k < picks.size(); ++k) {
    const auto& stored = table.rows[picks[k]];
    const auto& recomputed = fresh[k];
    if (stored.size() < recomputed.size()) {
      ok = false;
      continue;
    }
    for (std::size_t c = 0; c < recomputed.size(); ++c) {
      const auto a = parse_number(stored[c]);
      const auto b = parse_number(recomputed[c]);
      if (a && b) {
        if (std::isnan(*a) && std::isnan(*b)) continue;
        const double dev = std::abs(*a - *b) / std::max(1.0, std::abs(*a));
        report.max_deviation = std::max(report.max_deviation, dev);
        if (!(dev <= tolerance)) ok = false;
      } else if (stored[c] != recomputed[c]) {
        ok = false;
      }
    }
  }

  if (kind == ScenarioKind::scan_lambda) {
    // The argmax flags depend on every row; verify them against the stored values.
    for (const auto& [value_col, flag_col] :
         {std::pair{"entropy_norm", "argmax_entropy_norm"}, std::pair{"global_ent", "argmax_global_ent"}}) {
      const auto vc = table.column(value_col);
      const auto fc = table.column(flag_col);
      std::vector<double> v;
      for (const auto& row : table.rows) v.push_back(parse_number(row[vc]).value_or(NAN));
      const auto best = argmax_of(v);
      for (std::size_t i = 0; i < total; ++i) {
        if (table.rows[i][fc] != (i == best ? "1" : "0")) ok = false;
      }
    }
  }
  report.ok = ok;
  return report;
}

}  // namespace wharm
