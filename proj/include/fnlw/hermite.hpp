#ifndef FNLW_HERMITE_HPP
#define FNLW_HERMITE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fnlw/transform.hpp"

namespace fnlw {

/// H_k(x; sigma), the Hermite polynomial with generating function
/// exp(t x - sigma t^2 / 2) = sum_k t^k / k! H_k(x; sigma), via
/// H_{k+1} = x H_k - k sigma H_{k-1}.
template <typename Scalar>
Scalar hermite(int k, Scalar x, Scalar sigma) {
  if (k < 0) throw std::invalid_argument("Hermite degree must be >= 0");
  if (k == 0) return Scalar(1);
  Scalar previous = 1;
  Scalar current = x;
  for (int j = 1; j < k; ++j) {
    const Scalar next = x * current - Scalar(j) * sigma * previous;
    previous = current;
    current = next;
  }
  return current;
}

/// Power-basis coefficients c_0..c_k of H_k(x; sigma).
template <typename Scalar>
std::vector<Scalar> hermite_coefficients(int k, Scalar sigma) {
  if (k < 0) throw std::invalid_argument("Hermite degree must be >= 0");
  std::vector<Scalar> previous{Scalar(1)};
  if (k == 0) return previous;
  std::vector<Scalar> current{Scalar(0), Scalar(1)};
  for (int j = 1; j < k; ++j) {
    std::vector<Scalar> next(j + 2, Scalar(0));
    for (int i = 0; i <= j; ++i) next[i + 1] += current[i];
    for (int i = 0; i < j; ++i) next[i] -= Scalar(j) * sigma * previous[i];
    previous = std::move(current);
    current = std::move(next);
  }
  return current;
}

/// min over the real line of H_k(x; 1) for even k >= 2. Critical points are
/// the roots of dH_k/dx = k H_{k-1}, isolated by a sign scan on
/// |x| <= 2 sqrt(k) + 1 and refined by bisection.
inline double hermite_min(int k) {
  if (k < 2 || k % 2 != 0)
    throw std::invalid_argument("hermite_min needs an even degree >= 2");
  const double bound = 2.0 * std::sqrt(double(k)) + 1.0;
  const int cells = 400 * k;
  const double h = 2.0 * bound / cells;
  double best = std::numeric_limits<double>::infinity();
  auto derivative = [k](double x) { return hermite(k - 1, x, 1.0); };
  double a = -bound, fa = derivative(a);
  for (int c = 1; c <= cells; ++c) {
    const double b = -bound + c * h, fb = derivative(b);
    if (fa == 0.0) best = std::min(best, hermite(k, a, 1.0));
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = derivative(mid);
        if (mid == lo || mid == hi) break;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      best = std::min({best, hermite(k, lo, 1.0), hermite(k, hi, 1.0)});
    }
    a = b;
    fa = fb;
  }
  return best;
}

/// sigma_{alpha,N} = sum_{|n| <= N} <n>^{-2 alpha}, the pointwise variance of
/// P_N u under the Gaussian free field of regularity alpha.
inline double sigma_variance(double alpha, int N) {
  if (N < 0) throw std::invalid_argument("N must be >= 0");
  double total = 0.0;
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n2 = -N; n2 <= N; ++n2)
      if (n1 * n1 + n2 * n2 <= N * N) total += std::pow(1.0 + n1 * n1 + n2 * n2, -alpha);
  return total;
}

/// Renormalization data shared by every Wick operation.
struct WickContext {
  double alpha = 0.5;
  int m = 1;
  int N = 0;
  double sigma = 1.0;

  static WickContext make(double alpha, int m, int N) {
    return {alpha, m, N, sigma_variance(alpha, N)};
  }
  static WickContext for_grid(const GridSpec& grid) {
    return make(grid.alpha, grid.m, grid.N);
  }

  int wick_degree() const noexcept { return 2 * m + 2; }
};

namespace detail {
inline void check_wick_input(const Field& u, int k, const WickContext& ctx) {
  if (k < 0) throw std::invalid_argument("Wick power must be >= 0");
  if (k > ctx.wick_degree())
    throw std::invalid_argument("Wick power " + std::to_string(k) +
                                " exceeds the dealiasing guarantee 2m+2");
  if (u.band() > ctx.N)
    throw std::invalid_argument("field band " + std::to_string(u.band()) +
                                " exceeds the Wick truncation N=" + std::to_string(ctx.N));
}
}  // namespace detail

/// :u^k: = H_k(u(x); sigma) with sigma taken from ctx, returned with its full
/// band k N, alias-free.
inline Field wick_power(const Field& u, int k, const WickContext& ctx) {
  detail::check_wick_input(u, k, ctx);
  if (k == 1) return u;
  const double sigma = ctx.sigma;
  return map_pointwise(u, k, [k, sigma](double x) { return hermite(k, x, sigma); });
}

/// P_N(:u^k:) computed on u's own lattice (needs M >= (k+1) N + 1).
inline Field wick_power_projected(const Field& u, int k, const WickContext& ctx) {
  detail::check_wick_input(u, k, ctx);
  const double sigma = ctx.sigma;
  return map_pointwise_projected(u, k, ctx.N,
                                 [k, sigma](double x) { return hermite(k, x, sigma); });
}

/// Spatial mean of :u^k: (needs M >= k N + 1).
inline double wick_mean(const Field& u, int k, const WickContext& ctx) {
  detail::check_wick_input(u, k, ctx);
  const double sigma = ctx.sigma;
  return pointwise_mean(u, k, [k, sigma](double x) { return hermite(k, x, sigma); });
}

}  // namespace fnlw

#endif  // FNLW_HERMITE_HPP
