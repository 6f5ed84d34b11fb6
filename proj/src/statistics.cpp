#include "fnlw/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fnlw {

double Accumulator::variance() const noexcept {
  if (count_ < 2) return 0.0;
  const double m = mean();
  return std::max(0.0, (sum_sq_ - count_ * m * m) / (count_ - 1));
}

double Accumulator::standard_error() const noexcept {
  return count_ ? std::sqrt(variance() / count_) : 0.0;
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double total = 0.0;
  for (double v : values) total += v;
  return total / values.size();
}

double variance_of(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean_of(values);
  double total = 0.0;
  for (double v : values) total += (v - m) * (v - m);
  return total / (values.size() - 1);
}

EnsembleReport EnsembleReport::from_values(std::string observable,
                                           std::span<const double> values,
                                           std::uint64_t master_seed) {
  EnsembleReport r;
  r.observable = std::move(observable);
  r.count = static_cast<long>(values.size());
  r.mean = mean_of(values);
  r.variance = variance_of(values);
  r.standard_error = r.count ? std::sqrt(r.variance / r.count) : 0.0;
  r.master_seed = master_seed;
  return r;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
  if (x.size() < 2) throw std::invalid_argument("least squares needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate abscissae in least squares");
  LinearFit fit;
  fit.points = static_cast<long>(x.size());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

double integrated_autocorrelation_time(std::span<const double> series, double c) {
  const std::size_t n = series.size();
  if (n < 2) return std::numeric_limits<double>::infinity();
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (*lo == *hi) return std::numeric_limits<double>::infinity();
  const double m = mean_of(series);
  double c0 = 0.0;
  for (double v : series) c0 += (v - m) * (v - m);
  c0 /= n;
  if (!(c0 > 0.0)) return std::numeric_limits<double>::infinity();
  double tau = 1.0;
  for (std::size_t lag = 1; lag < n; ++lag) {
    double ct = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) ct += (series[i] - m) * (series[i + lag] - m);
    ct /= n;
    tau += 2.0 * ct / c0;
    if (static_cast<double>(lag) >= c * tau) break;
  }
  return std::max(tau, 1e-12);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("KS test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

}  // namespace fnlw
