#include <doctest.h>

#include <cmath>
#include <vector>

#include "fnlw/gaussian_measure.hpp"
#include "fnlw/lattice.hpp"
#include "fnlw/picard.hpp"
#include "fnlw/statistics.hpp"
#include "fnlw/stochastic.hpp"
#include "test_support.hpp"

using namespace fnlw;

namespace {

double l2_distance(const Field& a, const Field& b) {
  return std::sqrt((a.coefficients() - b.coefficients()).abs2().sum());
}

double l2_norm(const Field& a) { return std::sqrt(a.coefficients().abs2().sum()); }

}  // namespace

TEST_CASE("linear solution") {
  const WickContext ctx = WickContext::make(0.9, 1, 4);
  const GridSpec grid = GridSpec::for_band(4, 0.9, 1);
  const PhaseState data = sample_mu_alpha({3, 0}, grid);
  CHECK(l2_distance(linear_solution(data, 0.0), data.u) == 0.0);

  SUBCASE("mode variances are time independent") {
    const long K = 2000;
    const std::vector<Mode> probe{{0, 0}, {1, 0}, {2, 1}, {3, -2}, {0, 4}};
    for (double t : {0.5, 2.0}) {
      std::vector<Accumulator> acc(probe.size());
      for (long i = 0; i < K; ++i) {
        const Field z = linear_solution(sample_mu_alpha({11, static_cast<std::uint64_t>(i)}, grid), t);
        for (std::size_t p = 0; p < probe.size(); ++p) acc[p].add(std::norm(z.coefficient(probe[p])));
      }
      for (std::size_t p = 0; p < probe.size(); ++p) {
        const double expected = std::pow(1.0 + probe[p].norm_squared(), -0.9);
        CHECK(std::abs(acc[p].mean() - expected) <= 3.0 * acc[p].standard_error());
      }
    }
  }
  SUBCASE("Wick square has zero spatial mean in expectation") {
    Accumulator mean;
    for (long i = 0; i < 2000; ++i) {
      const auto obj = stochastic_object_z({5, static_cast<std::uint64_t>(i)}, 2,
                                           std::vector<double>{0.7}, ctx);
      mean.add(obj.snapshots[0].coefficient({0, 0}).real());
    }
    CHECK(std::abs(mean.mean()) <= 3.0 * mean.standard_error());
  }
}

TEST_CASE("stochastic objects") {
  const WickContext ctx = WickContext::make(0.8, 1, 2);
  const GridSpec grid = GridSpec::for_band(2, 0.8, 1);
  const SeedSpec seed{21, 4};
  const PhaseState data = sample_mu_alpha(seed, grid);
  const std::vector<double> times{0.0, 0.3, 0.6};

  SUBCASE("Wick powers keep their full band") {
    const auto obj = stochastic_object_z(seed, 3, times, ctx);
    REQUIRE(obj.snapshots.size() == times.size());
    const Field direct = wick_power(linear_solution(data, 0.3), 3, ctx);
    CHECK(l2_distance(obj.snapshots[1], direct) <= 1e-13 * l2_norm(direct));
    CHECK(obj.snapshots[1].band() == 6);
    CHECK_THROWS(stochastic_object_z(seed, 0, times, ctx));
    CHECK_THROWS(stochastic_object_z(seed, 4, times, ctx));
  }
  SUBCASE("several times at once agree with one at a time") {
    const auto many = duhamel_of_wick(data, 3, times, 0.05, ctx);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Field one = duhamel_of_wick(data, 3, times[i], 0.05, ctx);
      CHECK(l2_distance(many[i], one) <= 1e-14 * (1.0 + l2_norm(one)));
    }
    CHECK(l2_norm(many[0]) == 0.0);
  }
  SUBCASE("z2 is minus the Duhamel term and solves its equation") {
    const double dq = 0.005, t = 0.5, h = 0.05;
    const std::vector<double> around{t - h, t, t + h};
    const auto z2 = stochastic_object_z2(seed, around, ctx, dq);
    const Field d = duhamel_of_wick(data, 3, t, dq, ctx);
    CHECK(l2_distance(z2.snapshots[1], -1.0 * d) <= 1e-14 * l2_norm(d));
    // Mode-wise: z'' + w^2 z = -(:z^3:)^(n), by a centered difference in time.
    const Field force = wick_power(linear_solution(data, t), 3, ctx);
    double worst = 0.0, scale = 0.0;
    REQUIRE(force.size() == z2.snapshots[1].size());
    for_each_mode(force.size(), [&](Mode n, int i, int j) {
      const double w2 = std::pow(1.0 + n.norm_squared(), 0.8);
      const auto second = (z2.snapshots[0].coefficients()(i, j) - 2.0 * z2.snapshots[1].coefficients()(i, j) +
                           z2.snapshots[2].coefficients()(i, j)) / (h * h);
      worst = std::max(worst, std::abs(second + w2 * z2.snapshots[1].coefficients()(i, j) +
                                       force.coefficients()(i, j)));
      scale = std::max(scale, std::abs(force.coefficients()(i, j)));
    });
    CHECK(worst <= 5e-2 * scale);
  }
  SUBCASE("products") {
    const auto one = stochastic_object_product(seed, 0, 3, 0, times, ctx, 0.05);
    CHECK(one.snapshots[1].coefficient({0, 0}).real() == 1.0);
    CHECK(l2_norm(one.snapshots[1]) == 1.0);
    CHECK_THROWS(stochastic_object_product(seed, 3, 3, 1, times, ctx, 0.05));
    CHECK_THROWS(stochastic_object_product(seed, 1, 3, 4, times, ctx, 0.05));

    const GridSpec small = GridSpec::for_band(1, 0.8, 1);
    const Field a = test::random_field(small, 1), b = test::random_field(small, 2);
    const Field p = product_object(a, b, 2);
    const auto expected = test::convolve(test::to_map(a), test::convolve(test::to_map(b), test::to_map(b)));
    const auto got = test::to_map(p);
    double worst = 0.0;
    for (const auto& [k, v] : expected) {
      const auto it = got.find(k);
      worst = std::max(worst, std::abs(v - (it == got.end() ? std::complex<double>(0) : it->second)));
    }
    CHECK(worst <= 1e-12 * test::max_abs(expected));
    for (const auto& [k, v] : got)
      if (!expected.count(k)) worst = std::max(worst, std::abs(v));
    CHECK(worst <= 1e-12 * test::max_abs(expected));
  }
}

TEST_CASE("Picard iteration") {
  CHECK(picard_metric_s(0.95, 1) == doctest::Approx((2 * 0.95 / 3 + (4 * 0.95 - 3)) / 2));
  const WickContext ctx = WickContext::make(0.95, 1, 4);
  const SeedSpec seed{8, 0};
  const double T = 0.05;

  const EnhancedData data = EnhancedData::build(
      sample_mu_alpha(seed, GridSpec::for_band(4, 0.95, 1)), ctx, T, 0.0025, true);
  const PicardResult first = picard_solve_w(data, {});
  REQUIRE(first.converged);
  CHECK(first.contraction_ratio < 1.0);
  for (std::size_t i = 1; i + 1 < first.increments.size(); ++i)
    CHECK(first.increments[i] < first.increments[i - 1]);
  CHECK(l2_norm(first.w.front()) == 0.0);

  SUBCASE("residual is second order in the quadrature step") {
    const PicardResult coarse = picard_solve_w(seed, T, 0.005, ctx, {});
    const double ratio = coarse.residual / first.residual;
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));
  }
  SUBCASE("second order expansion reproduces the first") {
    const PicardResult second = picard_solve_w2(data, {});
    REQUIRE(second.converged);
    double worst = 0.0;
    for (std::size_t j = 0; j < data.nodes(); ++j) {
      const Field total = data.z2[j] + second.w[j];
      worst = std::max(worst, l2_distance(total, first.w[j]));
    }
    CHECK(worst <= 1e-10 * (1.0 + l2_norm(first.w.back())));
  }
  SUBCASE("no iterations allowed") {
    PicardOptions options;
    options.max_iters = 1;
    const PicardResult r = picard_solve_w(data, options);
    CHECK_FALSE(r.converged);
  }
}

TEST_CASE("direct flow against z + w") {
  const WickContext ctx = WickContext::make(0.95, 1, 4);
  const auto report = full_truncated_consistency({8, 0}, 0.05, 0.00125, 0.0025, ctx, {}, 2);
  REQUIRE(report.rows.size() == 2);
  REQUIRE(report.ratios.size() == 1);
  CHECK(report.rows[0].converged);
  CHECK(report.rows[1].dt == doctest::Approx(0.000625));
  CHECK(report.ratios[0] == doctest::Approx(4.0).epsilon(0.15));
}
