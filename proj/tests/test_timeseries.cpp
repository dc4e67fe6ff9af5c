#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wharm/timeseries.hpp"

using namespace wharm;

namespace {

TimeSeries sampled(double t0, double t1, double dt, double (*f)(double)) {
  std::vector<double> t;
  std::vector<double> v;
  const auto n = static_cast<int>(std::floor((t1 - t0) / dt + 1e-9));
  for (int k = 0; k <= n; ++k) {
    t.push_back(t0 + k * dt);
    v.push_back(f(t.back()));
  }
  return TimeSeries(t, v);
}

}  // namespace

TEST_CASE("TimeSeries validation") {
  CHECK_NOTHROW(TimeSeries({0, 1, 2}, {1, 2, 3}, "S"));
  CHECK_THROWS_AS(TimeSeries({0, 1}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(TimeSeries({0, 1, 1}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(TimeSeries({0, 2, 1}, {1, 2, 3}), std::invalid_argument);
  CHECK(TimeSeries({0, 1}, {1, 2}, "X").label() == "X");
}

TEST_CASE("window_stats examples") {
  const auto c = window_stats(sampled(0, 10, 0.1, [](double) { return 2.5; }), 1, 9);
  CHECK(c.mean == doctest::Approx(2.5));
  CHECK(c.stddev == doctest::Approx(0.0));
  CHECK(c.n_samples == 81);

  std::vector<double> t;
  std::vector<double> v;
  for (int k = 0; k < 100; ++k) {
    t.push_back(k);
    v.push_back(k % 2);
  }
  const auto alt = window_stats(TimeSeries(t, v), 0, 99);
  CHECK(alt.mean == doctest::Approx(0.5));
  CHECK(alt.stddev == doctest::Approx(0.5));

  const double two_pi = 2.0 * std::numbers::pi;
  const auto s = window_stats(sampled(0, 3 * two_pi, 0.01, [](double x) { return std::sin(x); }), 0, 3 * two_pi);
  CHECK(std::abs(s.mean) < 1e-3);
  CHECK(std::abs(s.stddev - 1.0 / std::sqrt(2.0)) < 1e-3);
}

TEST_CASE("window_stats errors") {
  const auto series = sampled(0, 1, 0.1, [](double x) { return x; });
  CHECK_THROWS_AS(window_stats(series, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(window_stats(series, 0.51, 0.59), std::invalid_argument);
  CHECK_THROWS_AS(window_stats(series, 2.0, 3.0), std::invalid_argument);
}

TEST_CASE("window_stats ignores samples outside the window and shifts with constants") {
  const auto inner = sampled(5, 10, 0.05, [](double x) { return std::cos(3 * x) + 0.1 * x; });
  const auto outer = sampled(0, 20, 0.05, [](double x) { return std::cos(3 * x) + 0.1 * x; });
  const auto a = window_stats(inner, 5, 10);
  const auto b = window_stats(outer, 5, 10);
  CHECK(a.n_samples == b.n_samples);
  CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
  CHECK(a.stddev == doctest::Approx(b.stddev).epsilon(1e-12));

  std::vector<double> shifted = outer.values();
  for (auto& x : shifted) x += 7.0;
  const auto c = window_stats(TimeSeries(outer.times(), shifted), 5, 10);
  CHECK(c.mean == doctest::Approx(b.mean + 7.0).epsilon(1e-12));
  CHECK(c.stddev == doctest::Approx(b.stddev).epsilon(1e-9));
  CHECK(c.stddev >= 0.0);
}

TEST_CASE("fit_linear examples") {
  const auto line = fit_linear(sampled(0, 2, 0.1, [](double x) { return 2 * x + 1; }), 0, 2);
  CHECK(line.slope == doctest::Approx(2.0));
  CHECK(line.intercept == doctest::Approx(1.0));
  CHECK(line.r_squared == doctest::Approx(1.0));

  const auto flat = fit_linear(sampled(0, 2, 0.1, [](double) { return 4.0; }), 0, 2);
  CHECK(flat.slope == doctest::Approx(0.0));
  CHECK(flat.r_squared == 1.0);

  std::vector<double> t;
  std::vector<double> v;
  const double eps = 1e-3;
  for (int k = 0; k < 40; ++k) {
    t.push_back(0.05 * k);
    v.push_back(3 * t.back() - 1 + (k % 2 ? eps : -eps));
  }
  const auto noisy = fit_linear(TimeSeries(t, v), 0, 2);
  CHECK(std::abs(noisy.slope - 3.0) < eps);
  CHECK(noisy.r_squared > 0.99);
  CHECK(noisy.r_squared <= 1.0);

  CHECK_THROWS_AS(fit_linear(sampled(0, 1, 0.5, [](double x) { return x; }), 0.4, 1.0), std::invalid_argument);
}

TEST_CASE("fit_exponential examples") {
  const auto e = fit_exponential(sampled(0, 2, 0.05, [](double x) { return 3 * std::exp(0.5 * x); }), 0, 2);
  CHECK(std::abs(e.rate - 0.5) < 1e-10);
  CHECK(std::abs(e.prefactor - 3.0) < 1e-10);
  CHECK(std::abs(e.r_squared_log - 1.0) < 1e-10);

  const auto c = fit_exponential(sampled(0, 1, 0.1, [](double) { return 2.0; }), 0, 1);
  CHECK(std::abs(c.rate) < 1e-14);

  CHECK_THROWS_AS(fit_exponential(sampled(-1, 1, 0.1, [](double x) { return x; }), -1, 1), std::invalid_argument);
}

TEST_CASE("fit_exponential equals a linear fit of the logarithm") {
  const auto series = sampled(0, 1, 0.02, [](double x) { return 1.0 + x * x + 0.3 * std::sin(9 * x); });
  std::vector<double> logs;
  for (double v : series.values()) logs.push_back(std::log(v));
  const auto e = fit_exponential(series, 0.1, 0.8);
  const auto l = fit_linear(TimeSeries(series.times(), logs), 0.1, 0.8);
  CHECK(e.rate == doctest::Approx(l.slope).epsilon(1e-14));
  CHECK(std::log(e.prefactor) == doctest::Approx(l.intercept).epsilon(1e-12));
  CHECK(e.r_squared_log == doctest::Approx(l.r_squared).epsilon(1e-14));
}

TEST_CASE("correlations") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 6, 8, 10};
  const std::vector<double> z{5, 3, 2, 1, 0};
  CHECK(pearson_correlation(x, y) == doctest::Approx(1.0));
  CHECK(spearman_correlation(x, z) == doctest::Approx(-1.0));
  const std::vector<double> cube{1, 8, 27, 64, 125};
  CHECK(spearman_correlation(x, cube) == doctest::Approx(1.0));
  CHECK(pearson_correlation(x, cube) < 1.0);
  const std::vector<double> ties{1, 1, 2, 2, 3};
  CHECK(spearman_correlation(x, ties) == doctest::Approx(pearson_correlation(x, std::vector<double>{1.5, 1.5, 3.5, 3.5, 5})));
  CHECK_THROWS_AS(pearson_correlation(x, std::vector<double>{1, 2}), std::invalid_argument);
}
