#include "wharm/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wharm {

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> values, std::string label)
    : times_(std::move(times)), values_(std::move(values)), label_(std::move(label)) {
  if (times_.size() != values_.size()) throw std::invalid_argument("times/values length mismatch");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("times must strictly increase");
  }
}

namespace {

struct Window {
  std::vector<double> t;
  std::vector<double> v;
};

Window select(const TimeSeries& s, double lo, double hi) {
  Window w;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.times()[i] >= lo && s.times()[i] <= hi) {
      w.t.push_back(s.times()[i]);
      w.v.push_back(s.values()[i]);
    }
  }
  return w;
}

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

LinearFit least_squares(std::span<const double> t, std::span<const double> v) {
  if (t.size() < 3) throw std::invalid_argument("fit needs at least 3 samples in window");
  const double tm = mean_of(t);
  const double vm = mean_of(v);
  double stt = 0.0;
  double stv = 0.0;
  double svv = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    stv += (t[i] - tm) * (v[i] - vm);
    svv += (v[i] - vm) * (v[i] - vm);
  }
  if (!(stt > 0.0)) throw std::invalid_argument("degenerate fit window");
  LinearFit f;
  f.slope = stv / stt;
  f.intercept = vm - f.slope * tm;
  if (svv == 0.0) {
    f.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = v[i] - (f.slope * t[i] + f.intercept);
      ss_res += r * r;
    }
    f.r_squared = std::clamp(1.0 - ss_res / svv, 0.0, 1.0);
  }
  return f;
}

std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

WindowStats window_stats(const TimeSeries& series, double t1, double t2) {
  if (!(t1 < t2)) throw std::invalid_argument("window needs t1 < t2");
  const Window w = select(series, t1, t2);
  if (w.v.size() < 2) throw std::invalid_argument("window contains fewer than 2 samples");
  WindowStats st{t1, t2, mean_of(w.v), 0.0, w.v.size()};
  double var = 0.0;
  for (double v : w.v) var += (v - st.mean) * (v - st.mean);
  st.stddev = std::sqrt(var / static_cast<double>(w.v.size()));
  return st;
}

LinearFit fit_linear(const TimeSeries& series, double t_lo, double t_hi) {
  const Window w = select(series, t_lo, t_hi);
  return least_squares(w.t, w.v);
}

ExponentialFit fit_exponential(const TimeSeries& series, double t_lo, double t_hi) {
  Window w = select(series, t_lo, t_hi);
  for (double& v : w.v) {
    if (!(v > 0.0)) throw std::invalid_argument("exponential fit needs positive values");
    v = std::log(v);
  }
  const LinearFit f = least_squares(w.t, w.v);
  return {f.slope, std::exp(f.intercept), f.r_squared};
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("correlation needs paired samples");
  const double xm = mean_of(x);
  const double ym = mean_of(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - xm) * (y[i] - ym);
    sxx += (x[i] - xm) * (x[i] - xm);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson_correlation(rx, ry);
}

}  // namespace wharm
