#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fnlw/gaussian_measure.hpp"
#include "fnlw/lattice.hpp"
#include "fnlw/parallel.hpp"
#include "test_support.hpp"

using namespace fnlw;

namespace {

/// u(x) by direct trigonometric summation.
double direct_value(const Field& f, double x1, double x2) {
  double total = 0.0;
  for_each_mode(f.size(), [&](Mode n, int i, int j) {
    const auto c = f.coefficients()(i, j);
    if (c == std::complex<double>(0)) return;
    total += (c * std::polar(1.0, n.n1 * x1 + n.n2 * x2)).real();
  });
  return total;
}

/// (2m+2)! * sum over (2m+2)-tuples in the ball summing to zero of prod <n_i>^{-2 alpha}.
double lattice_covariance(double alpha, int m, int N) {
  std::vector<Mode> ball;
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b)
      if (a * a + b * b <= N * N) ball.push_back({a, b});
  const int d = 2 * m + 2;
  auto weight = [alpha](Mode n) { return std::pow(1.0 + n.norm_squared(), -alpha); };
  double total = 0.0;
  std::vector<std::size_t> idx(d - 1, 0);
  for (;;) {
    Mode sum{0, 0};
    double w = 1.0;
    for (std::size_t i : idx) {
      sum = {sum.n1 + ball[i].n1, sum.n2 + ball[i].n2};
      w *= weight(ball[i]);
    }
    const Mode last{-sum.n1, -sum.n2};
    if (last.norm_squared() <= N * N) total += w * weight(last);
    std::size_t p = 0;
    while (p < idx.size() && ++idx[p] == ball.size()) idx[p++] = 0;
    if (p == idx.size()) break;
  }
  return std::tgamma(d + 1.0) * total;
}

}  // namespace

TEST_CASE("sampling conventions") {
  SUBCASE("N=0 keeps only a real zero mode") {
    const GridSpec grid = GridSpec::for_band(0, 0.5, 1);
    const PhaseState s = sample_mu_alpha({7, 0}, grid);
    CHECK(s.u.coefficient({0, 0}).imag() == 0.0);
    CHECK(s.u.coefficients().abs().sum() == doctest::Approx(std::abs(s.u.coefficient({0, 0}))));
    Accumulator acc;
    for (std::uint64_t k = 0; k < 20000; ++k)
      acc.add(std::norm(sample_mu_alpha({7, k}, grid).u.coefficient({0, 0})));
    CHECK(std::abs(acc.mean() - 1.0) <= 3.0 * acc.standard_error());
  }
  SUBCASE("reproducible and nested across radii") {
    const auto a = draw_gaussian_coefficients({11, 3}, 3);
    const auto b = draw_gaussian_coefficients({11, 3}, 6);
    const auto c = draw_gaussian_coefficients({11, 4}, 3);
    for (std::size_t i = 0; i < a.g0.size(); ++i) {
      CHECK(a.g0[i] == b.g0[i]);
      CHECK(a.g1[i] == b.g1[i]);
    }
    CHECK(a.g0 != c.g0);
    const GridSpec grid = GridSpec::for_band(3, 0.8, 1);
    const PhaseState s1 = sample_mu_alpha({11, 3}, grid), s2 = sample_mu_alpha({11, 3}, grid);
    CHECK((s1.u.coefficients() == s2.u.coefficients()).all());
    CHECK(hermitian_defect(s1.u) == 0.0);
    CHECK(out_of_band_magnitude(s1.u, 3) == 0.0);
  }
  SUBCASE("point variance equals sigma") {
    const GridSpec grid = GridSpec::for_band(8, 0.9, 1);
    Accumulator acc;
    for (std::uint64_t k = 0; k < 10000; ++k) {
      const double value = direct_value(sample_mu_alpha({99, k}, grid).u, 0.4, 1.9);
      acc.add(value * value);
    }
    CHECK(std::abs(acc.mean() - sigma_variance(0.9, 8)) <= 3.0 * acc.standard_error());
  }
  SUBCASE("mode variances of u and v") {
    const double alpha = 0.7;
    const GridSpec grid = GridSpec::for_band(4, alpha, 1);
    const auto& modes = half_ball_modes(4);
    std::vector<Accumulator> au(modes.size()), av(modes.size());
    for (std::uint64_t k = 0; k < 10000; ++k) {
      const PhaseState s = sample_mu_alpha({5, k}, grid);
      for (std::size_t i = 0; i < modes.size(); ++i) {
        au[i].add(std::norm(s.u.coefficient(modes[i])));
        av[i].add(std::norm(s.v.coefficient(modes[i])));
      }
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const double expected = std::pow(1.0 + modes[i].norm_squared(), -alpha);
      CHECK(std::abs(au[i].mean() - expected) <= 3.0 * au[i].standard_error());
      CHECK(std::abs(av[i].mean() - 1.0) <= 3.0 * av[i].standard_error());
    }
  }
}

TEST_CASE("white noise pairing") {
  const GridSpec grid = GridSpec::for_band(3, 0.5, 1);
  CHECK(white_noise_pairing(Field(grid), {1, 0}) == 0.0);
  Field f = test::random_field(grid, 21), h = test::random_field(grid, 22);
  f *= 1.0 / sobolev_norm(f, 0.0);
  Accumulator var, cross;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const double wf = white_noise_pairing(f, {3, k}), wh = white_noise_pairing(h, {3, k});
    var.add(wf * wf);
    cross.add(wf * wh);
  }
  CHECK(std::abs(var.mean() - 1.0) <= 3.0 * var.standard_error());
  CHECK(std::abs(cross.mean() - inner_product(f, h).real()) <= 3.0 * cross.standard_error());
  Field bad(grid);
  bad.coefficients()(1, 0) = {1.0, 0.0};
  CHECK_THROWS(white_noise_pairing(bad, {1, 0}));
}

TEST_CASE("renormalized potential") {
  SUBCASE("constant fields") {
    const GridSpec grid = GridSpec::for_band(4, 0.8, 1);
    const WickContext ctx = WickContext::for_grid(grid);
    CHECK(g_N(Field(grid), ctx) == doctest::Approx(3.0 * ctx.sigma * ctx.sigma).epsilon(1e-14));
    const GridSpec single = GridSpec::for_band(0, 0.8, 1);
    const WickContext unit = WickContext::for_grid(single);
    REQUIRE(unit.sigma == 1.0);
    Field one(single);
    one.set_symmetric({0, 0}, 1.0);
    CHECK(g_N(one, unit) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(r_N(PhaseState(single), unit) == doctest::Approx(std::exp(-0.75)).epsilon(1e-14));
    CHECK(gn_lower_bound(unit) == doctest::Approx(6.0).epsilon(1e-12));
  }
  SUBCASE("matches physical-space quadrature") {
    for (int m : {1, 2}) {
      const GridSpec grid = GridSpec::for_band(3, 0.85, m);
      const WickContext ctx = WickContext::for_grid(grid);
      const Field u = test::random_field(grid, 40 + m, 0.6);
      const int Q = (2 * m + 2) * 3 + 3;
      double quad = 0.0;
      for (int i = 0; i < Q; ++i)
        for (int j = 0; j < Q; ++j)
          quad += hermite(2 * m + 2,
                          direct_value(u, 2 * std::numbers::pi * i / Q, 2 * std::numbers::pi * j / Q),
                          ctx.sigma);
      quad /= Q * Q;
      CHECK(g_N(u, ctx) == doctest::Approx(quad).epsilon(1e-9));
    }
  }
  SUBCASE("Wick centering and pointwise bound over an ensemble") {
    const GridSpec grid = GridSpec::for_band(4, 0.9, 1);
    const WickContext ctx = WickContext::for_grid(grid);
    std::vector<double> values;
    std::vector<Accumulator> zero_modes(4);
    for (std::uint64_t k = 0; k < 4000; ++k) {
      const PhaseState s = sample_mu_alpha({17, k}, grid);
      values.push_back(g_N(s, ctx));
      for (int l = 1; l <= 4; ++l) zero_modes[l - 1].add(wick_mean(s.u, l, ctx));
      CHECK(r_N(s, ctx) <= std::exp(gn_lower_bound(ctx) / 4.0));
    }
    for (const auto& acc : zero_modes) CHECK(std::abs(acc.mean()) <= 3.0 * acc.standard_error());
    std::vector<double> negative(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) negative[i] = -values[i];
    const auto check = gn_pointwise_lower_bound_check(values, ctx);
    CHECK(check.passed());
    CHECK(check.samples == 4000);
    CHECK(check.bound == doctest::Approx(6.0 * ctx.sigma * ctx.sigma));

    const double sd = std::sqrt(exact_gn_covariance(0.9, 1, 4, 4));
    std::vector<double> lambdas{-1e6, 0.0, 0.5 * sd, sd, 2.0 * sd, 1.1 * check.bound};
    const TailStudy tail = tail_study(negative, ctx, lambdas, 10, 17);
    CHECK(tail.rows.front().probability == 1.0);
    CHECK(tail.rows.back().probability == 0.0);
    CHECK(tail.monotone);
  }
  SUBCASE("zero field satisfies the bound") {
    const GridSpec grid = GridSpec::for_band(2, 0.9, 1);
    const WickContext ctx = WickContext::for_grid(grid);
    const std::vector<double> one{g_N(Field(grid), ctx)};
    CHECK(gn_pointwise_lower_bound_check(one, ctx).passed());
    CHECK(-one[0] <= 6.0 * ctx.sigma * ctx.sigma);
  }
}

TEST_CASE("covariance kernel and exact covariance") {
  CHECK(gamma_kernel(0.7, 0).coefficients().abs().sum() == doctest::Approx(1.0));
  for (int N : {1, 3, 5}) {
    const Field g = gamma_kernel(0.6, N);
    CHECK(evaluate_at(g, 0.0, 0.0) == doctest::Approx(sigma_variance(0.6, N)).epsilon(1e-13));
  }
  const Field g = gamma_kernel(1.0, 1);
  CHECK(evaluate_at(g, 0.3, 1.2) ==
        doctest::Approx(1.0 + std::cos(0.3) + std::cos(1.2)).epsilon(1e-14));

  CHECK(exact_gn_covariance(0.8, 1, 0, 0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(exact_gn_gap_squared(0.8, 1, 3, 3) == 0.0);
  for (int N : {1, 2})
    CHECK(exact_gn_covariance(0.9, 1, N, N + 1) ==
          doctest::Approx(lattice_covariance(0.9, 1, N)).epsilon(1e-12));

  // Monte Carlo cross-check at N=1, M=2.
  Accumulator cross;
  const std::vector<int> radii{1, 2};
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const auto gn = paired_gn({8, k}, 0.9, 1, radii);
    cross.add(gn[0] * gn[1]);
  }
  CHECK(std::abs(cross.mean() - exact_gn_covariance(0.9, 1, 1, 2)) <= 3.0 * cross.standard_error());
}

TEST_CASE("paired evaluation matches direct evaluation") {
  const std::vector<int> radii{1, 3, 5};
  const auto gn = paired_gn({4, 2}, 0.9, 1, radii);
  const GridSpec big = GridSpec::for_band(5, 0.9, 1);
  const PhaseState s = sample_mu_alpha({4, 2}, big);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const GridSpec g = GridSpec::for_band(radii[i], 0.9, 1);
    const Field u = resample(project(s.u, radii[i]), g.M);
    Field banded(g);
    banded.coefficients() = u.coefficients();
    CHECK(gn[i] == doctest::Approx(g_N(banded, WickContext::for_grid(g))).epsilon(1e-11));
  }
}

TEST_CASE("Cauchy study is independent of the worker count") {
  const std::vector<int> radii{1, 2};
  const auto a = cauchy_rate_study(0.9, 1, radii, 4, 200, 77, 1);
  const auto b = cauchy_rate_study(0.9, 1, radii, 4, 200, 77, 3);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.rows.back().N == 4);
  CHECK(a.rows.back().exact_gap == 0.0);
  CHECK(a.theoretical_exponent == doctest::Approx(1.0 - 1.8 + 0.5));
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].mc_gap_squared == b.rows[i].mc_gap_squared);
    CHECK(a.rows[i].exact_gap == b.rows[i].exact_gap);
  }
  CHECK(a.fitted_slope == b.fitted_slope);
}

TEST_CASE("Wiener chaos ratios") {
  const std::vector<double> p_list{4.0};
  const std::vector<double> constant(1000, 2.5);
  const auto rows = wiener_chaos_check(constant, 0, p_list);
  CHECK(rows[0].ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rows[0].passed);

  const GridSpec grid = GridSpec::for_band(3, 0.5, 1);
  const Field f = test::random_field(grid, 3);
  std::vector<double> w;
  for (std::uint64_t k = 0; k < 20000; ++k) w.push_back(white_noise_pairing(f, {12, k}));
  const auto gaussian = wiener_chaos_check(w, 1, p_list);
  CHECK(gaussian[0].bound == doctest::Approx(std::sqrt(3.0)));
  CHECK(gaussian[0].passed);
  CHECK(std::abs(gaussian[0].ratio - std::pow(3.0, 0.25)) <= 3.0 * gaussian[0].relative_se * gaussian[0].ratio);
}

TEST_CASE("statistics helpers") {
  const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
  const LinearFit fit = least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope_se == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<double> flat(2000, 1.0);
  CHECK(std::isinf(integrated_autocorrelation_time(flat)));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<double> iid(20000), ar(20000);
  double state = 0.0;
  for (std::size_t i = 0; i < iid.size(); ++i) {
    iid[i] = normal(rng);
    state = 0.9 * state + normal(rng);
    ar[i] = state;
  }
  CHECK(integrated_autocorrelation_time(iid) == doctest::Approx(1.0).epsilon(0.1));
  // AR(1) with phi = 0.9: tau = (1 + phi) / (1 - phi) = 19.
  CHECK(integrated_autocorrelation_time(ar) == doctest::Approx(19.0).epsilon(0.25));

  std::uniform_real_distribution<double> unif;
  std::vector<double> u(5000);
  for (double& v : u) v = unif(rng);
  CHECK(ks_statistic(u, [](double t) { return std::clamp(t, 0.0, 1.0); }) * std::sqrt(5000.0) <
        kKolmogorovCritical1Percent);
  CHECK(ks_statistic(u, [](double t) { return std::clamp(t * t, 0.0, 1.0); }) * std::sqrt(5000.0) >
        kKolmogorovCritical1Percent);

  const auto squares = parallel_map(100, 4, [](std::size_t i) { return double(i * i); });
  CHECK(squares[9] == 81.0);
  CHECK_THROWS(parallel_map(10, 3, [](std::size_t i) -> int {
    if (i == 7) throw std::runtime_error("boom");
    return 0;
  }));
}
