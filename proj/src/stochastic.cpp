#include "fnlw/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fnlw/dynamics.hpp"
#include "fnlw/gaussian_measure.hpp"

namespace fnlw {

namespace {

GridSpec grid_of(const WickContext& ctx) { return GridSpec::for_band(ctx.N, ctx.alpha, ctx.m); }

void check_degree(int k, const WickContext& ctx, const char* what) {
  if (k < 1 || k > 2 * ctx.m + 1)
    throw std::invalid_argument(std::string(what) + " must lie in [1, 2m+1]");
}

}  // namespace

std::string StochasticObject::descriptor() const {
  switch (kind) {
    case ObjectKind::wick_power:
      return ":z^" + std::to_string(l) + ":";
    case ObjectKind::duhamel_of_wick:
      return "D(:z^" + std::to_string(l) + ":)";
    case ObjectKind::product:
      return ":z^" + std::to_string(k1) + ": D(:z^" + std::to_string(k) + ":)^" +
             std::to_string(k2);
  }
  return "?";
}

Field linear_solution(const PhaseState& data, double t) { return linear_propagate(data, t).u; }

std::vector<Field> duhamel_of_wick(const PhaseState& data, int k, std::span<const double> times,
                                   double dt_quad, const WickContext& ctx) {
  check_degree(k, ctx, "Wick degree");
  std::vector<DuhamelSum> sums;
  long last = 0;
  for (double t : times) {
    sums.emplace_back(t, dt_quad);
    last = std::max(last, sums.back().last_node());
  }
  for (long j = 0; j <= last; ++j) {
    const Field forcing = wick_power(linear_solution(data, j * dt_quad), k, ctx);
    for (auto& sum : sums)
      if (j <= sum.last_node()) sum.add(j, forcing);
  }
  std::vector<Field> out;
  out.reserve(sums.size());
  for (const auto& sum : sums) out.push_back(sum.result());
  return out;
}

Field duhamel_of_wick(const PhaseState& data, int k, double t, double dt_quad,
                      const WickContext& ctx) {
  const double times[] = {t};
  return duhamel_of_wick(data, k, times, dt_quad, ctx).front();
}

StochasticObject stochastic_object_z(const SeedSpec& seed, int l, std::span<const double> times,
                                     const WickContext& ctx) {
  check_degree(l, ctx, "Wick power l");
  const PhaseState data = sample_mu_alpha(seed, grid_of(ctx));
  StochasticObject obj;
  obj.kind = ObjectKind::wick_power;
  obj.l = l;
  obj.seed = seed;
  obj.times.assign(times.begin(), times.end());
  for (double t : times) obj.snapshots.push_back(wick_power(linear_solution(data, t), l, ctx));
  return obj;
}

StochasticObject stochastic_object_z2(const SeedSpec& seed, std::span<const double> times,
                                      const WickContext& ctx, double dt_quad) {
  const PhaseState data = sample_mu_alpha(seed, grid_of(ctx));
  StochasticObject obj;
  obj.kind = ObjectKind::duhamel_of_wick;
  obj.l = 2 * ctx.m + 1;
  obj.seed = seed;
  obj.times.assign(times.begin(), times.end());
  obj.snapshots = duhamel_of_wick(data, obj.l, times, dt_quad, ctx);
  for (auto& f : obj.snapshots) f *= -1.0;
  return obj;
}

Field product_object(const Field& wick_k1, const Field& duhamel_k, int k2) {
  if (k2 < 0) throw std::invalid_argument("k2 must be >= 0");
  Field out = wick_k1;
  for (int i = 0; i < k2; ++i) out = multiply(out, duhamel_k);
  return out;
}

StochasticObject stochastic_object_product(const SeedSpec& seed, int k1, int k, int k2,
                                           std::span<const double> times, const WickContext& ctx,
                                           double dt_quad) {
  check_degree(k, ctx, "k");
  if (k1 < 0 || k1 > k - 1) throw std::invalid_argument("k1 must lie in [0, k-1]");
  if (k2 < 0 || k2 > k) throw std::invalid_argument("k2 must lie in [0, k]");
  const GridSpec grid = grid_of(ctx);
  const PhaseState data = sample_mu_alpha(seed, grid);
  StochasticObject obj;
  obj.kind = ObjectKind::product;
  obj.k1 = k1;
  obj.k = k;
  obj.k2 = k2;
  obj.seed = seed;
  obj.times.assign(times.begin(), times.end());
  std::vector<Field> duhamels;
  if (k2 > 0) duhamels = duhamel_of_wick(data, k, times, dt_quad, ctx);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Field z = linear_solution(data, times[i]);
    Field base = k1 == 0 ? Field(grid) : wick_power(z, k1, ctx);
    if (k1 == 0) {
      base.set_symmetric({0, 0}, 1.0);
      base.set_band(0);
    }
    obj.snapshots.push_back(k2 == 0 ? base : product_object(base, duhamels[i], k2));
  }
  return obj;
}

}  // namespace fnlw
