#include "fnlw/picard.hpp"

#include <cmath>
#include <stdexcept>

#include "fnlw/dynamics.hpp"
#include "fnlw/gaussian_measure.hpp"
#include "fnlw/stochastic.hpp"

namespace fnlw {

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

using Values = GridValues<double>;

Values integer_power(const Values& x, int p) {
  Values out = Values::Ones(x.rows(), x.cols());
  for (int i = 0; i < p; ++i) out *= x;
  return out;
}

/// P_N sum_l C(2m+1, l) :z^l: y^{2m+1-l} at node j; equals P_N H_{2m+1}(z + y).
Values first_order_values(const EnhancedData& d, std::size_t j, const Values& y) {
  const int q = 2 * d.ctx.m + 1;
  Values acc = Values::Zero(d.grid.M, d.grid.M);
  Values ypow = Values::Ones(d.grid.M, d.grid.M);
  for (int l = q; l >= 0; --l) {
    acc += binomial(q, l) * d.wick[l][j] * ypow;
    ypow *= y;
  }
  return acc;
}

/// The w2 nonlinearity: every term of the double binomial expansion of
/// :(z + z2 + w2)^{2m+1}: except :z^{2m+1}:.
Values second_order_values(const EnhancedData& d, std::size_t j, const Values& z2,
                           const Values& w2) {
  const int q = 2 * d.ctx.m + 1;
  Values acc = Values::Zero(d.grid.M, d.grid.M);
  for (int l = 0; l <= q; ++l) {
    const int rest = q - l;
    for (int i = 0; i <= rest; ++i) {
      if (l == q) continue;
      const double c = binomial(q, l) * binomial(rest, i);
      acc += c * d.wick[l][j] * integer_power(z2, rest - i) * integer_power(w2, i);
    }
  }
  return acc;
}

Field project_values(const EnhancedData& d, const Values& values) {
  return project(analyze(d.grid, values), d.grid.N);
}

Field nonlinearity(const EnhancedData& d, std::size_t j, const Field& w, bool second_order) {
  const Values wv = synthesize(w);
  if (!second_order) return project_values(d, first_order_values(d, j, wv));
  return project_values(d, second_order_values(d, j, synthesize(d.z2[j]), wv));
}

PicardResult solve(const EnhancedData& d, const PicardOptions& options, bool second_order) {
  if (second_order && d.z2.size() != d.nodes())
    throw std::invalid_argument("second order Picard needs z2 in the enhanced data");
  PicardResult result;
  result.s = options.s >= 0.0 ? options.s : picard_metric_s(d.ctx.alpha, d.ctx.m);
  const std::size_t J = d.nodes() - 1;
  std::vector<Field> w(d.nodes(), Field(d.grid));
  for (int it = 0; it < options.max_iters; ++it) {
    std::vector<Field> forcing;
    forcing.reserve(d.nodes());
    for (std::size_t j = 0; j <= J; ++j) forcing.push_back(nonlinearity(d, j, w[j], second_order));
    std::vector<Field> next(d.nodes(), Field(d.grid));
    double increment = 0.0;
    for (std::size_t j = 0; j <= J; ++j) {
      next[j] = duhamel(std::span<const Field>(forcing.data(), j + 1), d.times[j], d.dt_quad);
      next[j] *= -1.0;
      next[j].set_band(d.grid.N);
      increment = std::max(increment, sobolev_norm(next[j] - w[j], result.s));
    }
    w = std::move(next);
    result.increments.push_back(increment);
    result.iterations = it + 1;
    if (increment < options.tol) {
      result.converged = true;
      break;
    }
  }
  const auto& inc = result.increments;
  for (std::size_t i = 1; i < inc.size(); ++i)
    if (inc[i - 1] > 0.0) result.contraction_ratio = std::max(result.contraction_ratio, inc[i] / inc[i - 1]);
  result.w = std::move(w);
  result.residual = picard_residual(d, result.w, second_order);
  return result;
}

}  // namespace

EnhancedData EnhancedData::build(const PhaseState& data, const WickContext& ctx, double T,
                                 double dt_quad, bool second_order) {
  EnhancedData d;
  d.grid = data.grid();
  d.grid.validate();
  if (d.grid.N != ctx.N) throw std::invalid_argument("data band differs from the Wick context");
  d.ctx = ctx;
  d.dt_quad = dt_quad;
  const long J = step_count(T, dt_quad);
  const int q = 2 * ctx.m + 1;
  d.wick.assign(q + 1, {});
  for (long j = 0; j <= J; ++j) {
    const double t = j * dt_quad;
    d.times.push_back(t);
    d.z.push_back(linear_solution(data, t));
    const Values zv = synthesize(d.z.back());
    for (int l = 0; l <= q; ++l)
      d.wick[l].push_back(zv.unaryExpr([&](double x) { return hermite(l, x, ctx.sigma); }));
  }
  if (second_order) {
    // z2 = -D(P_N :z^{2m+1}:), the part of the truncated nonlinearity driven by z alone.
    std::vector<Field> forcing;
    for (long j = 0; j <= J; ++j) forcing.push_back(project_values(d, d.wick[q][j]));
    for (long j = 0; j <= J; ++j) {
      Field z2 = duhamel(std::span<const Field>(forcing.data(), j + 1), d.times[j], dt_quad);
      z2 *= -1.0;
      z2.set_band(d.grid.N);
      d.z2.push_back(std::move(z2));
    }
  }
  return d;
}

double picard_metric_s(double alpha, int m) {
  const double s0 = 2.0 * m * alpha / (2.0 * m + 1.0);
  const double s1 = alpha * (2.0 * m + 2.0) - (2.0 * m + 1.0);
  return 0.5 * (s0 + s1);
}

PicardResult picard_solve_w(const EnhancedData& data, const PicardOptions& options) {
  return solve(data, options, false);
}

PicardResult picard_solve_w(const SeedSpec& seed, double T, double dt_quad, const WickContext& ctx,
                            const PicardOptions& options) {
  const PhaseState data = sample_mu_alpha(seed, GridSpec::for_band(ctx.N, ctx.alpha, ctx.m));
  return solve(EnhancedData::build(data, ctx, T, dt_quad, false), options, false);
}

PicardResult picard_solve_w2(const EnhancedData& data, const PicardOptions& options) {
  return solve(data, options, true);
}

PicardResult picard_solve_w2(const SeedSpec& seed, double T, double dt_quad,
                             const WickContext& ctx, const PicardOptions& options) {
  const PhaseState data = sample_mu_alpha(seed, GridSpec::for_band(ctx.N, ctx.alpha, ctx.m));
  return solve(EnhancedData::build(data, ctx, T, dt_quad, true), options, true);
}

double picard_residual(const EnhancedData& d, const std::vector<Field>& w, bool second_order) {
  if (w.size() != d.nodes()) throw std::invalid_argument("trajectory does not match the nodes");
  const double h2 = d.dt_quad * d.dt_quad;
  Eigen::ArrayXXd omega2(d.grid.M, d.grid.M);
  for_each_mode(d.grid.M, [&](Mode n, int i, int j) {
    omega2(i, j) = std::pow(1.0 + n.norm_squared(), d.ctx.alpha);
  });
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < d.nodes(); ++j) {
    Field r = nonlinearity(d, j, w[j], second_order);
    r.coefficients() += (w[j + 1].coefficients() - 2.0 * w[j].coefficients() +
                         w[j - 1].coefficients()) / h2 +
                        omega2 * w[j].coefficients();
    worst = std::max(worst, sobolev_norm(r, 0.0));
  }
  return worst;
}

ConsistencyReport full_truncated_consistency(const SeedSpec& seed, double T, double dt,
                                             double dt_quad, const WickContext& ctx,
                                             const PicardOptions& options, int levels) {
  const GridSpec grid = GridSpec::for_band(ctx.N, ctx.alpha, ctx.m);
  const PhaseState data = sample_mu_alpha(seed, grid);
  ConsistencyReport report;
  report.T = T;
  for (int level = 0; level < levels; ++level) {
    const double h = dt / (1 << level), hq = dt_quad / (1 << level);
    const PhaseState direct = evolve(data, T, h, ctx, 1L << 40).states.back();
    const EnhancedData enhanced = EnhancedData::build(data, ctx, T, hq, false);
    const PicardResult picard = picard_solve_w(enhanced, options);
    Field gap = direct.u - enhanced.z.back() - picard.w.back();
    report.rows.push_back({h, hq, sobolev_norm(gap, 0.0), picard.converged});
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    report.ratios.push_back(report.rows[i].gap > 0.0 ? report.rows[i - 1].gap / report.rows[i].gap
                                                     : 0.0);
  return report;
}

}  // namespace fnlw
