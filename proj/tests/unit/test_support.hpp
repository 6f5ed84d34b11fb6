#ifndef FNLW_TEST_SUPPORT_HPP
#define FNLW_TEST_SUPPORT_HPP

#include <complex>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "fnlw/fourier_field.hpp"
#include "fnlw/lattice.hpp"

namespace fnlw::test {

/// Random real field with i.i.d. complex coefficients on |n| <= N.
inline Field random_field(const GridSpec& grid, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Field f(grid);
  for (const Mode n : half_ball_modes(grid.N))
    f.set_symmetric(n, {normal(rng), n.norm_squared() == 0 ? 0.0 : normal(rng)});
  return f;
}

using ModeMap = std::map<std::pair<int, int>, std::complex<double>>;

inline ModeMap to_map(const Field& f) {
  ModeMap out;
  for_each_mode(f.size(), [&](Mode n, int i, int j) {
    const auto c = f.coefficients()(i, j);
    if (c != std::complex<double>(0)) out[{n.n1, n.n2}] = c;
  });
  return out;
}

/// Brute-force coefficient convolution (product of the synthesized fields).
inline ModeMap convolve(const ModeMap& a, const ModeMap& b) {
  ModeMap out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) out[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
  return out;
}

inline double max_abs(const ModeMap& m) {
  double worst = 0.0;
  for (const auto& [k, v] : m) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace fnlw::test

#endif  // FNLW_TEST_SUPPORT_HPP
