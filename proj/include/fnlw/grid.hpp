#ifndef FNLW_GRID_HPP
#define FNLW_GRID_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace fnlw {

/// Lattice point n = (n1, n2) of Z^2.
struct Mode {
  int n1 = 0;
  int n2 = 0;

  constexpr int norm_squared() const noexcept { return n1 * n1 + n2 * n2; }
  constexpr Mode operator-() const noexcept { return {-n1, -n2}; }
  friend constexpr bool operator==(Mode, Mode) = default;
};

/// Japanese bracket <n> = sqrt(1 + |n|^2).
template <typename Scalar = double>
inline Scalar bracket(Mode n) {
  return std::sqrt(Scalar(1) + Scalar(n.norm_squared()));
}

/// True when n lies in the closed Euclidean ball of radius N.
constexpr bool in_ball(Mode n, int N) noexcept {
  return N >= 0 && n.norm_squared() <= N * N;
}

/// Fixed lattice half-ordering: n > 0 iff n2 > 0, or n2 == 0 and n1 > 0.
constexpr bool is_positive(Mode n) noexcept {
  return n.n2 > 0 || (n.n2 == 0 && n.n1 > 0);
}

/// Storage index i in [0, M) of the wavenumber k (k taken modulo M).
constexpr int storage_index(int k, int M) noexcept {
  const int r = k % M;
  return r < 0 ? r + M : r;
}

/// Wavenumber stored at index i: i for i <= (M-1)/2, i - M otherwise.
constexpr int wavenumber(int i, int M) noexcept {
  return i <= (M - 1) / 2 ? i : i - M;
}

/// Whether wavenumber k has its own slot on an M-point lattice.
constexpr bool representable(int k, int M) noexcept {
  return k >= -(M / 2) && k <= (M - 1) / 2;
}

/// Smallest integer >= n whose only prime factors are 2, 3 and 5.
inline int fft_size_at_least(int n) {
  if (n <= 1) return 1;
  for (int candidate = n;; ++candidate) {
    int r = candidate;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return candidate;
  }
}

/// Discretization of the 2-periodic torus [0, 2pi)^2 together with the
/// equation parameters.
///
/// `N` is the band radius of fields living on this grid (coefficients vanish
/// for |n| > N), `M` the number of physical grid points per dimension.
/// Dynamics grids additionally satisfy M >= (2m+2) N + 1, see validate().
struct GridSpec {
  int N = 0;
  int M = 1;
  double alpha = 0.5;
  int m = 1;

  int wick_degree() const noexcept { return 2 * m + 2; }
  int nonlinearity_degree() const noexcept { return 2 * m + 1; }

  /// Smallest lattice size that evaluates degree-(2m+2) Wick powers of a
  /// band-N field without aliasing into the zero mode or into |n| <= N.
  static int minimal_size(int N, int m) { return (2 * m + 2) * N + 1; }

  /// Grid with M = fft_size_at_least(minimal_size(N, m)).
  static GridSpec for_band(int N, double alpha, int m) {
    GridSpec g{N, fft_size_at_least(minimal_size(N, m)), alpha, m};
    g.validate();
    return g;
  }

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("alpha must satisfy 0 < alpha < 1 (got " +
                                  std::to_string(alpha) + ")");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (N < 0) throw std::invalid_argument("N must be >= 0");
    if (M < minimal_size(N, m))
      throw std::invalid_argument(
          "grid size M=" + std::to_string(M) + " violates M >= (2m+2)N+1 = " +
          std::to_string(minimal_size(N, m)));
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

}  // namespace fnlw

#endif  // FNLW_GRID_HPP
