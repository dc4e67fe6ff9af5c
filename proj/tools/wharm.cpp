// wharm: Wigner-harmonics complexity experiments on tilted-field Ising chains.
//
// Exit codes: 0 ok, 2 config error, 3 size/cap error, 4 numeric failure
// (including a failed `check`), 5 I/O error.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wharm/config.hpp"
#include "wharm/errors.hpp"
#include "wharm/scenarios.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kSize = 3, kNumeric = 4, kIo = 5 };

struct GlobalOptions {
  std::string config_path;
  std::string out_path;
  int threads = 0;
  std::string propagator;
  bool verbose = false;
};

int run(const std::string& command, const GlobalOptions& opts, const std::string& check_target) {
  using namespace wharm;
  if (opts.threads > 0) set_thread_count(opts.threads);

  ConfigEntries entries =
      opts.config_path.empty() ? ConfigEntries{} : read_config_file(opts.config_path);
  if (!opts.propagator.empty()) entries.set("propagator", opts.propagator);
  const ScenarioConfig config = build_config(entries);
  const std::string out_path = !opts.out_path.empty() ? opts.out_path : config.output_path;

  const auto t0 = std::chrono::steady_clock::now();
  if (command == "check") {
    const std::string target = !check_target.empty() ? check_target : out_path;
    if (target.empty()) throw ConfigError("check needs a CSV path (positional or --out)");
    const CheckReport r = check_csv(config, entries, target);
    std::string rows;
    for (auto i : r.rows_checked) rows += (rows.empty() ? "" : " ") + std::to_string(i);
    std::cout << fmt::format("check {}: rows [{}] max deviation {:.3g} -> {}\n", target, rows,
                             r.max_deviation, r.ok ? "ok" : "MISMATCH");
    return r.ok ? kOk : kNumeric;
  }

  CsvTable table;
  if (command == "evolve") {
    table = run_evolution(config);
  } else if (command == "scan-field") {
    table = scan_transverse_field(config);
  } else if (command == "scan-lambda") {
    table = scan_lambda(config);
  } else if (command == "levels") {
    table = diagnose_levels(config);
  }
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';

  const auto hash = config_hash(entries);
  if (out_path.empty()) {
    write_csv(table, hash, std::cout);
  } else {
    write_csv(table, hash, std::filesystem::path(out_path));
  }
  if (opts.verbose) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << fmt::format("{}: {} rows in {:.2f} s ({} threads)\n", command, table.rows.size(),
                             secs, thread_count());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner-harmonics entropy and entanglement dynamics of Ising chains"};
  app.set_version_flag("--version", wharm::tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "Scenario config (key = value)");
  app.add_option("--out", opts.out_path, "Output CSV (default: output_path or stdout)");
  app.add_option("--threads", opts.threads, "Worker threads (overrides WHARM_THREADS)")
      ->check(CLI::PositiveNumber);
  app.add_option("--propagator", opts.propagator, "Propagation method")
      ->check(CLI::IsMember({"auto", "spectral", "krylov"}));
  app.add_flag("--verbose", opts.verbose, "Report timing and diagnostics on stderr");

  std::string check_target;
  app.add_subcommand("evolve", "Time series of observables from the initial state");
  app.add_subcommand("scan-field", "S(t), time-averaged S and fluctuations versus h_x");
  app.add_subcommand("scan-lambda", "S_norm and GE versus lambda = h_x / (J + h_x)");
  app.add_subcommand("levels", "Mean level-spacing ratio per field value");
  auto* check = app.add_subcommand("check", "Recompute three random rows of an existing CSV");
  check->add_option("csv", check_target, "CSV file to verify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opts, check_target);
  } catch (const wharm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const wharm::SizeError& e) {
    std::cerr << "size error: " << e.what() << '\n';
    return kSize;
  } catch (const wharm::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const wharm::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
}
