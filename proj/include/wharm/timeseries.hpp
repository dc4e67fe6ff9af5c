#pragma once

#include <span>
#include <string>
#include <vector>

namespace wharm {

class TimeSeries {
 public:
  /// Throws std::invalid_argument unless the lengths match and times are
  /// strictly increasing.
  TimeSeries(std::vector<double> times, std::vector<double> values, std::string label = {});

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  std::string label_;
};

/// Time average and standard deviation over [t1, t2]:
///   mean   = (1/tau) int S dt
///   stddev = sqrt((1/tau) int (S - mean)^2 dt)
/// discretized as the plain (1/n) mean over samples of a uniform grid.
struct WindowStats {
  double t1 = 0.0;
  double t2 = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n_samples = 0;
};

/// Throws std::invalid_argument for t1 >= t2 or fewer than 2 samples in the
/// window.
WindowStats window_stats(const TimeSeries& series, double t1, double t2);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // 1 when the target has zero variance
};

/// Ordinary least squares over samples with t in [t_lo, t_hi]; needs >= 3
/// samples with distinct times.
LinearFit fit_linear(const TimeSeries& series, double t_lo, double t_hi);

struct ExponentialFit {
  double rate = 0.0;
  double prefactor = 0.0;
  double r_squared_log = 0.0;
};

/// value ~ prefactor * exp(rate t), fitted linearly on ln(value). Throws
/// std::invalid_argument on non-positive values in the window.
ExponentialFit fit_exponential(const TimeSeries& series, double t_lo, double t_hi);

double pearson_correlation(std::span<const double> x, std::span<const double> y);
/// Pearson correlation of average ranks.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace wharm
