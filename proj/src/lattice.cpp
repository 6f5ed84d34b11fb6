#include "fnlw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace fnlw {

const std::vector<Mode>& half_ball_modes(int N) {
  if (N < 0) throw std::invalid_argument("ball radius must be >= 0");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<std::vector<Mode>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[N];
  if (!slot) {
    auto modes = std::make_unique<std::vector<Mode>>();
    for (int n2 = 0; n2 <= N; ++n2)
      for (int n1 = -N; n1 <= N; ++n1) {
        const Mode n{n1, n2};
        if (in_ball(n, N) && is_positive(n)) modes->push_back(n);
      }
    std::sort(modes->begin(), modes->end(), [](Mode a, Mode b) {
      return std::tuple(a.norm_squared(), a.n2, a.n1) <
             std::tuple(b.norm_squared(), b.n2, b.n1);
    });
    modes->insert(modes->begin(), Mode{0, 0});
    slot = std::move(modes);
  }
  return *slot;
}

double discrete_conv_sum(Mode n, double a, double b, int cutoff) {
  if (cutoff * cutoff < n.norm_squared())
    throw std::invalid_argument("cutoff must be >= |n|");
  // Tabulate <k>^{-a} and <k>^{-b} by |k|^2 to avoid repeated pow calls.
  const int max_r2 = 2 * cutoff * cutoff;
  std::vector<double> weight_a(max_r2 + 1), weight_b(max_r2 + 1);
  for (int r2 = 0; r2 <= max_r2; ++r2) {
    weight_a[r2] = std::pow(1.0 + r2, -0.5 * a);
    weight_b[r2] = std::pow(1.0 + r2, -0.5 * b);
  }
  const int c2 = cutoff * cutoff;
  double total = 0.0;
  for (int k1 = -cutoff; k1 <= cutoff; ++k1)
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      const int r2 = k1 * k1 + k2 * k2;
      if (r2 > c2) continue;
      const int d1 = n.n1 - k1, d2 = n.n2 - k2;
      const int s2 = d1 * d1 + d2 * d2;
      if (s2 > c2) continue;
      total += weight_a[r2] * weight_b[s2];
    }
  return total;
}

}  // namespace fnlw
