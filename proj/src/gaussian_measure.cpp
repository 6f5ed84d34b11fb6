#include "fnlw/gaussian_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fnlw/lattice.hpp"
#include "fnlw/parallel.hpp"

namespace fnlw {

namespace {

std::complex<double> draw_complex(Engine& engine, bool origin) {
  if (origin) {
    std::normal_distribution<double> unit(0.0, 1.0);
    return {unit(engine), 0.0};
  }
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  const double re = half(engine);
  const double im = half(engine);
  return {re, im};
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double inverse_bracket_power(Mode n, double alpha) {
  return std::pow(1.0 + n.norm_squared(), -0.5 * alpha);
}

}  // namespace

GaussianCoefficients draw_gaussian_coefficients(const SeedSpec& seed, int N) {
  const auto& modes = half_ball_modes(N);
  Engine engine = make_engine(seed);
  GaussianCoefficients g;
  g.g0.reserve(modes.size());
  g.g1.reserve(modes.size());
  for (const Mode n : modes) {
    const bool origin = n.norm_squared() == 0;
    g.g0.push_back(draw_complex(engine, origin));
    g.g1.push_back(draw_complex(engine, origin));
  }
  return g;
}

Field gaussian_field(const GridSpec& grid, std::span<const std::complex<double>> g,
                     const std::function<double(Mode)>& weight) {
  const auto& modes = half_ball_modes(grid.N);
  if (g.size() < modes.size()) throw std::invalid_argument("too few Gaussian coefficients");
  Field f(grid);
  for (std::size_t i = 0; i < modes.size(); ++i) f.set_symmetric(modes[i], weight(modes[i]) * g[i]);
  return f;
}

PhaseState sample_mu_alpha(const SeedSpec& seed, const GridSpec& grid) {
  const auto g = draw_gaussian_coefficients(seed, grid.N);
  const double alpha = grid.alpha;
  return PhaseState(
      gaussian_field(grid, g.g0, [alpha](Mode n) { return inverse_bracket_power(n, alpha); }),
      gaussian_field(grid, g.g1, [](Mode) { return 1.0; }));
}

Field draw_u(Engine& engine, const GridSpec& grid) {
  Field u(grid);
  for (const Mode n : half_ball_modes(grid.N))
    u.set_symmetric(n, inverse_bracket_power(n, grid.alpha) * draw_complex(engine, n.norm_squared() == 0));
  return u;
}

Field draw_v(Engine& engine, const GridSpec& grid) {
  Field v(grid);
  for (const Mode n : half_ball_modes(grid.N))
    v.set_symmetric(n, draw_complex(engine, n.norm_squared() == 0));
  return v;
}

double white_noise_pairing(const Field& f, const SeedSpec& seed) {
  const double scale = std::max(1.0, f.coefficients().abs().maxCoeff());
  if (hermitian_defect(f) > 1e-12 * scale)
    throw std::invalid_argument("white noise pairing needs a real (Hermitian) field");
  if (out_of_band_magnitude(f, f.band()) > 0.0)
    throw std::invalid_argument("field has modes outside its declared band");
  const auto& modes = half_ball_modes(f.band());
  const auto g = draw_gaussian_coefficients(seed, f.band());
  double total = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto term = f.coefficient(modes[i]) * std::conj(g.g0[i]);
    // n and -n together contribute 2 Re(f^(n) conj(g_n)).
    total += modes[i].norm_squared() == 0 ? term.real() : 2.0 * term.real();
  }
  return total;
}

double g_N(const Field& u, const WickContext& ctx) {
  return wick_mean(u, ctx.wick_degree(), ctx);
}

double g_N(const PhaseState& state, const WickContext& ctx) { return g_N(state.u, ctx); }

std::vector<double> sample_gn(const WickContext& ctx, long K, std::uint64_t master_seed,
                              int workers) {
  if (K < 1) throw std::invalid_argument("sample count must be >= 1");
  const GridSpec grid = GridSpec::for_band(ctx.N, ctx.alpha, ctx.m);
  return parallel_map(static_cast<std::size_t>(K), resolve_workers(workers), [&](std::size_t i) {
    return g_N(sample_mu_alpha({master_seed, i}, grid), ctx);
  });
}

double r_N(const PhaseState& state, const WickContext& ctx) {
  return std::exp(-g_N(state, ctx) / ctx.wick_degree());
}

double gn_lower_bound(const WickContext& ctx) {
  return -hermite_min(ctx.wick_degree()) * std::pow(ctx.sigma, ctx.m + 1);
}

Field gamma_kernel(const GridSpec& grid) {
  if (grid.M < 2 * grid.N + 1) throw std::invalid_argument("grid too small for the kernel");
  Field gamma(grid);
  for (const Mode n : half_ball_modes(grid.N))
    gamma.set_symmetric(n, std::pow(1.0 + n.norm_squared(), -grid.alpha));
  return gamma;
}

Field gamma_kernel(double alpha, int N) { return gamma_kernel(GridSpec{N, 2 * N + 1, alpha, 1}); }

double exact_gn_covariance(double alpha, int m, int n_low, int n_high) {
  const int N = std::min(n_low, n_high);
  if (N < 0) throw std::invalid_argument("truncations must be >= 0");
  const int k = 2 * m + 2;
  const GridSpec grid{N, k * N + 1, alpha, m};
  const double integral = pointwise_mean(gamma_kernel(grid), k, [k](double x) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= x;
    return p;
  });
  return factorial(k) * integral;
}

double exact_gn_gap_squared(double alpha, int m, int n_low, int n_high) {
  if (n_low == n_high) return 0.0;
  return std::abs(exact_gn_covariance(alpha, m, n_high, n_high) -
                  exact_gn_covariance(alpha, m, n_low, n_low));
}

std::vector<double> paired_gn(const SeedSpec& seed, double alpha, int m,
                              std::span<const int> radii) {
  if (radii.empty()) return {};
  const int N_max = *std::max_element(radii.begin(), radii.end());
  const GridSpec grid = GridSpec::for_band(N_max, alpha, m);
  const Field u = sample_mu_alpha(seed, grid).u;
  std::vector<double> out;
  out.reserve(radii.size());
  for (int r : radii) {
    const GridSpec small = GridSpec::for_band(r, alpha, m);
    const Field ur = resample(project(u, r), small.M);
    out.push_back(g_N(ur, WickContext::for_grid(small)));
  }
  return out;
}

CauchyStudy cauchy_rate_study(double alpha, int m, std::span<const int> radii, int N_max,
                              long samples, std::uint64_t master_seed, int workers) {
  CauchyStudy study;
  study.alpha = alpha;
  study.m = m;
  study.N_max = N_max;
  study.samples = samples;
  study.master_seed = master_seed;
  study.theoretical_exponent = 1.0 - 2.0 * alpha + double(m) / (m + 1);
  study.in_theory = alpha > 1.0 - 1.0 / (2 * m + 2) && alpha < 1.0;

  std::vector<int> all(radii.begin(), radii.end());
  for (int r : all)
    if (r > N_max) throw std::invalid_argument("every N must be <= N_max");
  if (std::find(all.begin(), all.end(), N_max) == all.end()) all.push_back(N_max);
  std::sort(all.begin(), all.end());

  std::vector<std::vector<double>> gn;
  if (samples > 0) {
    gn = parallel_map(static_cast<std::size_t>(samples), workers, [&](std::size_t i) {
      return paired_gn(SeedSpec{master_seed, i}, alpha, m, all);
    });
  }
  const std::size_t top = all.size() - 1;
  for (std::size_t r = 0; r < all.size(); ++r) {
    CauchyRow row;
    row.N = all[r];
    row.exact_gap = std::sqrt(exact_gn_gap_squared(alpha, m, all[r], N_max));
    if (samples > 0) {
      Accumulator acc;
      for (const auto& g : gn) acc.add((g[top] - g[r]) * (g[top] - g[r]));
      row.mc_gap_squared = acc.mean();
      row.mc_gap_squared_se = acc.standard_error();
      row.mc_gap = std::sqrt(acc.mean());
    }
    study.rows.push_back(row);
  }
  std::vector<double> lx, ly;
  for (const auto& row : study.rows)
    if (row.N >= 1 && row.N < N_max && row.exact_gap > 0.0) {
      lx.push_back(std::log(double(row.N)));
      ly.push_back(std::log(row.exact_gap));
    }
  if (lx.size() >= 2) {
    const auto fit = least_squares(lx, ly);
    study.fitted_slope = fit.slope;
    study.fitted_slope_se = fit.slope_se;
  }
  return study;
}

LowerBoundCheck gn_pointwise_lower_bound_check(std::span<const double> gn_values,
                                               const WickContext& ctx) {
  LowerBoundCheck check;
  check.samples = static_cast<long>(gn_values.size());
  check.bound = gn_lower_bound(ctx);
  check.max_negative_gn = -std::numeric_limits<double>::infinity();
  for (double g : gn_values) {
    check.max_negative_gn = std::max(check.max_negative_gn, -g);
    if (-g > check.bound) ++check.violations;
  }
  return check;
}

TailStudy tail_study(std::span<const double> negative_gn, const WickContext& ctx,
                     std::span<const double> lambda_grid, long min_hits,
                     std::uint64_t master_seed) {
  if (negative_gn.empty()) throw std::invalid_argument("tail study needs samples");
  TailStudy study;
  study.ctx = ctx;
  study.samples = static_cast<long>(negative_gn.size());
  study.master_seed = master_seed;
  study.bound = gn_lower_bound(ctx);
  std::vector<double> sorted(negative_gn.begin(), negative_gn.end());
  std::sort(sorted.begin(), sorted.end());
  study.min_observed = sorted.front();
  study.max_observed = sorted.back();
  std::vector<double> lambdas(lambda_grid.begin(), lambda_grid.end());
  std::sort(lambdas.begin(), lambdas.end());
  const double K = static_cast<double>(sorted.size());
  for (double lambda : lambdas) {
    TailRow row;
    row.lambda = lambda;
    row.hits = static_cast<long>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lambda));
    row.probability = row.hits / K;
    row.censored = row.hits < min_hits;
    study.rows.push_back(row);
  }
  for (std::size_t i = 1; i < study.rows.size(); ++i)
    if (study.rows[i].probability > study.rows[i - 1].probability) study.monotone = false;
  std::vector<double> x, y;
  for (const auto& row : study.rows)
    if (!row.censored && row.lambda > 0.0) {
      x.push_back(std::pow(row.lambda, 1.0 / (ctx.m + 1)));
      y.push_back(std::log(row.probability));
    }
  if (x.size() >= 2) {
    study.fit = least_squares(x, y);
    study.fit_available = true;
  }
  return study;
}

std::vector<ChaosRow> wiener_chaos_check(std::span<const double> values, int k,
                                         std::span<const double> p_list, double slack) {
  if (values.size() < 2) throw std::invalid_argument("chaos check needs samples");
  const double K = static_cast<double>(values.size());
  double second = 0.0;
  for (double x : values) second += x * x;
  second /= K;
  std::vector<ChaosRow> rows;
  for (double p : p_list) {
    ChaosRow row;
    row.p = p;
    double moment = 0.0;
    for (double x : values) moment += std::pow(std::abs(x), p);
    moment /= K;
    row.norm_p = std::pow(moment, 1.0 / p);
    row.norm_2 = std::sqrt(second);
    row.ratio = row.norm_2 > 0.0 ? row.norm_p / row.norm_2 : 1.0;
    row.bound = std::pow(p - 1.0, 0.5 * k);
    // Delta method for log(ratio) = log(moment)/p - log(second)/2.
    if (moment > 0.0 && second > 0.0) {
      Accumulator influence;
      for (double x : values)
        influence.add(std::pow(std::abs(x), p) / (p * moment) - x * x / (2.0 * second));
      row.relative_se = influence.standard_error();
    }
    row.passed = row.ratio <= row.bound * (1.0 + slack * row.relative_se) + 1e-12;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fnlw
