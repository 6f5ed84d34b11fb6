#ifndef FNLW_STATISTICS_HPP
#define FNLW_STATISTICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fnlw {

/// Running sums for mean / variance. Adding values in a fixed order gives a
/// bit-reproducible result.
class Accumulator {
 public:
  void add(double x) noexcept {
    ++count_;
    sum_ += x;
    sum_sq_ += x * x;
  }
  long count() const noexcept { return count_; }
  double mean() const noexcept { return count_ ? sum_ / count_ : 0.0; }
  /// Unbiased sample variance.
  double variance() const noexcept;
  double standard_error() const noexcept;

 private:
  long count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

/// Monte Carlo summary of one scalar observable.
struct EnsembleReport {
  std::string observable;
  long count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double standard_error = 0.0;
  std::uint64_t master_seed = 0;

  static EnsembleReport from_values(std::string observable, std::span<const double> values,
                                    std::uint64_t master_seed);
};

double mean_of(std::span<const double> values);
/// Unbiased variance; two-pass.
double variance_of(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  long points = 0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Integrated autocorrelation time with Sokal's self-consistent window
/// (window W is the first lag with W >= c * tau(W)). Returns +infinity for a
/// series with zero variance.
double integrated_autocorrelation_time(std::span<const double> series, double c = 5.0);

/// Kolmogorov-Smirnov statistic sup_x |F_n(x) - F(x)|.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic 1% critical value of sqrt(n) * D_n.
inline constexpr double kKolmogorovCritical1Percent = 1.6276;

}  // namespace fnlw

#endif  // FNLW_STATISTICS_HPP
