#ifndef FNLW_STOCHASTIC_HPP
#define FNLW_STOCHASTIC_HPP

#include <span>
#include <string>
#include <vector>

#include "fnlw/hermite.hpp"
#include "fnlw/phase_state.hpp"
#include "fnlw/random.hpp"

namespace fnlw {

enum class ObjectKind { wick_power, duhamel_of_wick, product };

/// Snapshots of one stochastic object of the first/second order expansion for
/// one sample. Snapshots keep their true band (l N for :z^l:, and so on).
struct StochasticObject {
  ObjectKind kind = ObjectKind::wick_power;
  int l = 1;
  int k1 = 0, k = 0, k2 = 0;
  SeedSpec seed;
  std::vector<double> times;
  std::vector<Field> snapshots;

  std::string descriptor() const;
};

/// z_N(t) = linear evolution of the u-component of `data`.
Field linear_solution(const PhaseState& data, double t);

/// D(:z_N^k:)(t) with the trapezoid rule on nodes j * dt_quad, 0 <= j <= t / dt_quad.
/// Full band k N; the Duhamel sign is the operator's own (no minus).
Field duhamel_of_wick(const PhaseState& data, int k, double t, double dt_quad,
                      const WickContext& ctx);

/// The same at several times, sharing the forcing evaluations.
std::vector<Field> duhamel_of_wick(const PhaseState& data, int k, std::span<const double> times,
                                   double dt_quad, const WickContext& ctx);

/// :z_N^l:(t) for 1 <= l <= 2m+1 and the data drawn from `seed`.
StochasticObject stochastic_object_z(const SeedSpec& seed, int l, std::span<const double> times,
                                     const WickContext& ctx);

/// z_2(t) = -D(:z_N^{2m+1}:)(t), the zero-data solution of
/// z_tt + (1 - Delta)^alpha z + :z_N^{2m+1}: = 0.
StochasticObject stochastic_object_z2(const SeedSpec& seed, std::span<const double> times,
                                      const WickContext& ctx, double dt_quad);

/// Y_N = :z_N^{k1}: (D(:z_N^k:))^{k2}, 0 <= k1 <= k - 1, 0 <= k2 <= k.
StochasticObject stochastic_object_product(const SeedSpec& seed, int k1, int k, int k2,
                                           std::span<const double> times, const WickContext& ctx,
                                           double dt_quad);

/// Product of the two objects above from already computed pieces.
Field product_object(const Field& wick_k1, const Field& duhamel_k, int k2);

}  // namespace fnlw

#endif  // FNLW_STOCHASTIC_HPP
