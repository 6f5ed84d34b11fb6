#ifndef FNLW_DIAGNOSTICS_HPP
#define FNLW_DIAGNOSTICS_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fnlw/dynamics.hpp"
#include "fnlw/statistics.hpp"

namespace fnlw {

/// Ensemble means of |X^(n)|^2 over the half ball n > 0, 1 <= |n| <= radius.
class SecondMoments {
 public:
  explicit SecondMoments(int radius = 0);

  void add(const Field& f);
  /// Adds another accumulator (sums are combined in call order).
  void merge(const SecondMoments& other);

  int radius() const noexcept { return radius_; }
  long samples() const noexcept { return samples_; }
  const std::vector<Mode>& modes() const noexcept { return modes_; }
  /// Mean of |X^(modes()[i])|^2.
  double mean(std::size_t i) const { return samples_ ? sums_[i] / samples_ : 0.0; }

 private:
  int radius_;
  long samples_ = 0;
  std::vector<Mode> modes_;
  std::vector<double> sums_;
};

enum class FitKind { exact_law, upper_bound, report_only };

struct FitWindow {
  int lo = 3;
  int hi = 0;  // <= 0: N - 2
};

struct DecayFit {
  std::string descriptor;
  double slope = 0.0;
  double slope_se = 0.0;
  long points = 0;
  long samples = 0;
  double theoretical = 0.0;
  double tolerance = 0.0;
  FitKind kind = FitKind::upper_bound;
  double alpha_threshold = 0.0;  // in theory iff alpha > alpha_threshold
  bool in_theory = true;
  double mean_sup_norm = 0.0;    // ensemble mean of max_x |X(x)|
  double exact_slope = std::numeric_limits<double>::quiet_NaN();  // fit of the exact expectation
  bool passed = false;
};

inline constexpr long kMinimumFitSamples = 500;

/// Least squares of log E|X^(n)|^2 against log <n> over lo <= |n| <= hi.
/// Verdict: |slope - theoretical| <= tolerance for an exact law, slope <=
/// theoretical + tolerance for an upper bound, always true for report_only.
DecayFit fit_decay_exponent(const SecondMoments& moments, int lo, int hi, double theoretical,
                            double tolerance, FitKind kind, std::string descriptor);

struct ProductSpec {
  int k1 = 1, k = 3, k2 = 1;
};

struct RegularityOptions {
  double alpha = 0.95;
  int m = 1;
  int N = 32;
  long samples = 1000;
  std::uint64_t seed = 0;
  double t = 1.0;
  double dt_quad = 0.02;
  FitWindow window;
  std::vector<ProductSpec> products{{1, 3, 1}};
  double tol_exact = 0.1;
  double tol_bound = 0.15;
  double tol_product = 0.2;
  int workers = 1;
};

struct RegularityReport {
  RegularityOptions options;
  std::vector<DecayFit> rows;
  bool passed() const;
};

/// One DecayFit per object: :z^l: for l <= 2m+1, D(:z^{2m+1}:), and each
/// configured product.
RegularityReport regularity_report(const RegularityOptions& options);

/// Slope of the exact expectation E|:z^l:^(n)|^2 = l! (gamma_{alpha,N}^l)^(n)
/// fitted over the same window as the Monte Carlo moments.
double exact_wick_power_slope(double alpha, int N, int l, int lo, int hi);

/// Theoretical exponents of E|X^(n)|^2 ~ <n>^{exponent}.
double wick_power_exponent(double alpha, int l);
double duhamel_exponent(double alpha, int k);
double product_exponent(double alpha, int k1);

/// Fractional admissibility 2/p + 2/q <= 1, p, q in [2, inf], (p, q) != (2, inf).
/// Throws std::invalid_argument naming the violated condition.
void check_admissible(double p, double q);
/// gamma_{p,q} = 1 - 2/q - alpha/p.
double strichartz_gamma(double alpha, double p, double q);
/// s_c = 1 - alpha/m.
double critical_index(double alpha, int m);

struct StrichartzReport {
  double p = 0.0, q = 0.0, s = 0.0;
  double gamma = 0.0;
  double critical_index = 0.0;
  double linf_hs = 0.0;  // max_t ||u(t)||_{H^s}
  double lp_wq = 0.0;    // || ||<D>^{s-gamma} u(t)||_{L^q_x} ||_{L^p_t}, grid quadrature
};

/// Discrete-time Strichartz norms of a trajectory's u component. Requires q < inf.
StrichartzReport strichartz_report(const TrajectorySample& traj, double p, double q, double s);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace fnlw

#endif  // FNLW_DIAGNOSTICS_HPP
