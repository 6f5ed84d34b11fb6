#ifndef FNLW_LATTICE_HPP
#define FNLW_LATTICE_HPP

#include <vector>

#include "fnlw/grid.hpp"

namespace fnlw {

/// Origin followed by the modes n > 0 of the closed ball |n| <= N, ordered by
/// (|n|^2, n2, n1). The list for radius N is a prefix of the list for any
/// larger radius, which makes Gaussian draws nested across truncations.
const std::vector<Mode>& half_ball_modes(int N);

/// Brute-force sum over n1 + n2 = n, |n1|, |n2| <= cutoff, of
/// <n1>^{-a} <n2>^{-b}.
double discrete_conv_sum(Mode n, double a, double b, int cutoff);

}  // namespace fnlw

#endif  // FNLW_LATTICE_HPP
