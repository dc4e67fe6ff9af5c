#include "wharm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

#include "wharm/errors.hpp"

namespace wharm {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const ConfigEntries& e) : e_(e) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const auto it = e_.lines.find(key);
    const std::string where = it == e_.lines.end() ? e_.source : fmt::format("{}:{}", e_.source, it->second);
    throw ConfigError(fmt::format("{}: key '{}': {}", where, key, msg));
  }

  const std::string* raw(const std::string& key) {
    used_.push_back(key);
    const auto it = e_.values.find(key);
    return it == e_.values.end() ? nullptr : &it->second;
  }

  double real(const std::string& key, double fallback) {
    const auto* v = raw(key);
    return v ? parse_real(key, *v) : fallback;
  }

  double parse_real(const std::string& key, std::string_view s) const {
    double out = 0.0;
    const auto t = trim(s);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(out)) {
      fail(key, fmt::format("'{}' is not a finite number", s));
    }
    return out;
  }

  long long integer(const std::string& key, long long fallback) {
    const auto* v = raw(key);
    if (!v) return fallback;
    long long out = 0;
    const auto t = trim(*v);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail(key, fmt::format("'{}' is not an integer", *v));
    return out;
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto* v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    fail(key, fmt::format("'{}' is not a boolean", *v));
  }

  std::string text(const std::string& key, std::string fallback) {
    const auto* v = raw(key);
    return v ? *v : fallback;
  }

  template <class E>
  E choice(const std::string& key, E fallback, const std::vector<std::pair<std::string, E>>& options) {
    const auto* v = raw(key);
    if (!v) return fallback;
    for (const auto& [name, value] : options) {
      if (*v == name) return value;
    }
    std::string names;
    for (const auto& o : options) names += (names.empty() ? "" : ", ") + o.first;
    fail(key, fmt::format("'{}' is not one of {{{}}}", *v, names));
  }

  std::vector<double> reals(const std::string& key) {
    std::vector<double> out;
    if (const auto* v = raw(key)) {
      for (const auto& piece : split_list(*v)) out.push_back(parse_real(key, piece));
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : e_.values) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) fail(key, "unknown key");
    }
  }

 private:
  const ConfigEntries& e_;
  std::vector<std::string> used_;
};

const std::vector<std::pair<std::string, Observable>> kObservables = {
    {"entropy", Observable::entropy},
    {"entropy_norm", Observable::entropy_norm},
    {"second_moment", Observable::second_moment},
    {"participation", Observable::participation},
    {"global_ent", Observable::global_ent},
    {"sigma_x", Observable::sigma_x},
};

const std::vector<std::pair<std::string, ScanColumn>> kScanColumns = {
    {"s_at_t", ScanColumn::s_at_t},
    {"s_mean", ScanColumn::s_mean},
    {"s_std", ScanColumn::s_std},
    {"x_std", ScanColumn::x_std},
};

}  // namespace

void ConfigEntries::set(const std::string& key, const std::string& value) {
  values[key] = value;
  lines.erase(key);
}

ConfigEntries lex_config(std::string_view text, std::string source) {
  ConfigEntries e;
  e.source = std::move(source);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", e.source, line_no));
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", e.source, line_no));
    if (value.empty()) {
      throw ConfigError(fmt::format("{}:{}: key '{}' has no value", e.source, line_no, key));
    }
    if (e.values.contains(key)) {
      throw ConfigError(fmt::format("{}:{}: duplicate key '{}' (first on line {})", e.source,
                                    line_no, key, e.lines[key]));
    }
    e.values[key] = value;
    e.lines[key] = line_no;
  }
  return e;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return lex_config(buf.str(), path.string());
}

ScenarioConfig build_config(const ConfigEntries& entries) {
  Reader r(entries);
  ScenarioConfig c;

  const long long n_sites = r.integer("model.n_sites", c.model.n_sites);
  const long long cap = r.integer("model.site_cap", kDefaultSiteCap);
  if (cap < 1 || cap > kMaxSiteCap) r.fail("model.site_cap", fmt::format("must lie in [1, {}]", kMaxSiteCap));
  if (n_sites < 1 || n_sites > cap) {
    throw SizeError(fmt::format("model.n_sites = {} outside [1, {}]", n_sites, cap));
  }
  c.model.n_sites = static_cast<int>(n_sites);
  c.model.site_cap = static_cast<int>(cap);
  c.model.coupling = r.real("model.coupling", c.model.coupling);
  c.model.field_x = r.real("model.field_x", c.model.field_x);
  c.model.field_z = r.real("model.field_z", c.model.field_z);
  c.model.boundary = r.choice<Boundary>("model.boundary", Boundary::open,
                                        {{"open", Boundary::open}, {"periodic", Boundary::periodic}});
  c.model.quant_axis =
      r.choice<QuantAxis>("model.quant_axis", QuantAxis::z, {{"z", QuantAxis::z}, {"x", QuantAxis::x}});

  c.initial_state = r.choice<InitialState>("initial_state", c.initial_state,
                                           {{"all_down_z", InitialState::all_down_z},
                                            {"all_down_x", InitialState::all_down_x},
                                            {"custom_file", InitialState::custom_file}});
  c.initial_state_file = r.text("initial_state.file", "");
  if (c.initial_state == InitialState::custom_file && c.initial_state_file.empty()) {
    r.fail("initial_state.file", "required when initial_state = custom_file");
  }

  c.time.t_start = r.real("time.t_start", c.time.t_start);
  c.time.t_end = r.real("time.t_end", c.time.t_end);
  c.time.dt = r.real("time.dt", c.time.dt);
  try {
    c.time.validate();
  } catch (const ConfigError& e) {
    r.fail("time.dt", e.what());
  }

  if (const auto* obs = r.raw("observables")) {
    c.observables.clear();
    for (const auto& name : split_list(*obs)) {
      bool found = false;
      for (const auto& [n, o] : kObservables) {
        if (n == name) {
          if (std::find(c.observables.begin(), c.observables.end(), o) == c.observables.end()) {
            c.observables.push_back(o);
          }
          found = true;
        }
      }
      if (!found) r.fail("observables", fmt::format("unknown observable '{}'", name));
    }
    if (c.observables.empty()) r.fail("observables", "must name at least one observable");
  }

  const auto* scan_param = r.raw("scan.parameter");
  auto values = r.reals("scan.values");
  const double start = r.real("scan.start", NAN);
  const double stop = r.real("scan.stop", NAN);
  const double step = r.real("scan.step", NAN);
  const bool has_range = !std::isnan(start) || !std::isnan(stop) || !std::isnan(step);
  if (has_range) {
    if (!values.empty()) r.fail("scan.values", "give either scan.values or scan.start/stop/step");
    if (std::isnan(start) || std::isnan(stop) || std::isnan(step) || !(step > 0.0) || stop < start) {
      r.fail("scan.step", "scan range needs start <= stop and step > 0");
    }
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    if (count > 100000) r.fail("scan.step", "scan range has too many points");
    for (long long k = 0; k <= count; ++k) {
      // Round to 12 decimals so grids such as 0.05 k print cleanly.
      values.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
  }
  if (scan_param) {
    if (*scan_param != "field_x" && *scan_param != "lambda") {
      r.fail("scan.parameter", fmt::format("'{}' is not one of {{field_x, lambda}}", *scan_param));
    }
    if (values.empty()) r.fail("scan.parameter", "scan needs scan.values or a scan range");
    c.scan = ScanAxis{*scan_param, values};
  } else if (!values.empty()) {
    r.fail("scan.values", "scan values given without scan.parameter");
  }

  c.sample_time = r.real("scan.sample_time", c.sample_time);
  if (const auto* cols = r.raw("scan.columns")) {
    c.scan_columns.clear();
    for (const auto& name : split_list(*cols)) {
      bool found = false;
      for (const auto& [n, col] : kScanColumns) {
        if (n == name) {
          c.scan_columns.push_back(col);
          found = true;
        }
      }
      if (!found) r.fail("scan.columns", fmt::format("unknown column '{}'", name));
    }
  }
  c.window_t1 = r.real("window.t1", c.window_t1);
  c.window_t2 = r.real("window.t2", c.window_t2);
  if (!(c.window_t1 < c.window_t2)) r.fail("window.t2", "window needs t1 < t2");

  c.lambda_entropy_time = r.real("lambda.entropy_time", c.lambda_entropy_time);
  c.lambda_ge_time = r.real("lambda.ge_time", c.lambda_ge_time);
  c.lambda_initial = r.choice<LambdaInitial>(
      "lambda.initial", c.lambda_initial,
      {{"basis_down", LambdaInitial::basis_down}, {"z_down", LambdaInitial::z_down}});

  c.resolve_symmetry = r.boolean("levels.resolve_symmetry", c.resolve_symmetry);
  c.partition_mode = r.choice<PartitionMode>(
      "partitions.mode", c.partition_mode,
      {{"all_subsets", PartitionMode::all_subsets}, {"contiguous", PartitionMode::contiguous}});
  c.sigma_x_mode = r.choice<SigmaXMode>("sigma_x.mode", c.sigma_x_mode,
                                         {{"average", SigmaXMode::average}, {"site", SigmaXMode::site}});
  c.sigma_x_site = static_cast<int>(r.integer("sigma_x.site", 0));
  if (c.sigma_x_site < 0 || c.sigma_x_site >= c.model.n_sites) r.fail("sigma_x.site", "site out of range");

  c.propagator = r.choice<PropagatorKind>("propagator", c.propagator,
                                          {{"auto", PropagatorKind::automatic},
                                           {"spectral", PropagatorKind::spectral},
                                           {"krylov", PropagatorKind::krylov}});
  c.krylov.subspace_dim = static_cast<int>(r.integer("krylov.subspace_dim", c.krylov.subspace_dim));
  c.krylov.step = r.real("krylov.step", c.krylov.step);
  c.krylov.tolerance = r.real("krylov.tolerance", c.krylov.tolerance);
  if (c.krylov.subspace_dim < 4) r.fail("krylov.subspace_dim", "must be >= 4");
  if (!(c.krylov.step > 0.0)) r.fail("krylov.step", "must be positive");
  if (!(c.krylov.tolerance > 0.0)) r.fail("krylov.tolerance", "must be positive");

  const long long seed = r.integer("seed", 0);
  c.seed = static_cast<std::uint64_t>(seed);
  c.output_path = r.text("output_path", "");

  r.reject_unknown();
  return c;
}

ScenarioConfig parse_config(std::string_view text) { return build_config(lex_config(text)); }

std::uint64_t config_hash(const ConfigEntries& entries) {
  std::uint64_t h = 14695981039346656037ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [key, value] : entries.values) {
    if (key == "output_path") continue;
    feed(key);
    feed("=");
    feed(value);
    feed("\n");
  }
  return h;
}

std::string to_string(Observable o) {
  for (const auto& [name, value] : kObservables) {
    if (value == o) return name;
  }
  return "?";
}

std::string to_string(ScanColumn c) {
  for (const auto& [name, value] : kScanColumns) {
    if (value == c) return name;
  }
  return "?";
}

}  // namespace wharm
