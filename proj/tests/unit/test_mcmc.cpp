#include <doctest.h>

#include <cmath>
#include <vector>

#include "fnlw/gaussian_measure.hpp"
#include "fnlw/lattice.hpp"
#include "fnlw/mcmc.hpp"
#include "fnlw/statistics.hpp"

using namespace fnlw;

namespace {

NamedObservable mode_power(Mode n, bool velocity = false) {
  return {"mode", [n, velocity](const PhaseState& s) {
            return std::norm((velocity ? s.v : s.u).coefficient(n));
          }};
}

ChainState fresh_chain(const GridSpec& grid, const WickContext& ctx, const PcnOptions& options,
                       Engine& engine) {
  return start_chain(PhaseState(draw_u(engine, grid), draw_v(engine, grid)), ctx, options);
}

/// Mean of a correlated series with an autocorrelation-corrected standard error.
struct ChainMean {
  double mean, se;
};

ChainMean chain_mean(const std::vector<double>& series) {
  const double tau = integrated_autocorrelation_time(series);
  return {mean_of(series), std::sqrt(variance_of(series) * tau / series.size())};
}

}  // namespace

TEST_CASE("pCN bookkeeping") {
  const GridSpec grid = GridSpec::for_band(4, 0.9, 1);
  const WickContext ctx = WickContext::for_grid(grid);
  Engine engine = make_engine({1, 0});
  ChainState chain = fresh_chain(grid, ctx, {}, engine);
  CHECK(chain.step_size == 0.2);
  for (int i = 0; i < 300; ++i) {
    const long before = chain.accept_count;
    pcn_step(chain, engine, ctx, {});
    if (chain.accept_count > before)
      CHECK(std::abs(chain.log_weight + g_N(chain.state, ctx) / 4.0) <=
            1e-10 * std::max(1.0, std::abs(chain.log_weight)));
  }
  CHECK(chain.total_count == 300);
  CHECK(chain.accept_count > 0);
  CHECK_THROWS(start_chain(chain.state, ctx, {1.5, true}));
  CHECK_THROWS(start_chain(chain.state, ctx, {-0.1, true}));

  SUBCASE("beta = 0 never moves u") {
    ChainState still = fresh_chain(grid, ctx, {0.0, true}, engine);
    const Field u0 = still.state.u;
    ChainHistory h = record_chain(still, engine, ctx, {0.0, true}, 1000,
                                  {{"u", [](const PhaseState& s) { return s.u.coefficient({1, 0}).real(); }}});
    CHECK(h.accepted == 1000);
    CHECK((still.state.u.coefficients() == u0.coefficients()).all());
    const ChainDiagnostics d = chain_diagnostics(h);
    CHECK(std::isinf(d.iat[0]));
    CHECK(d.acceptance_rate == 1.0);
  }
}

TEST_CASE("virial is the scaling derivative of the potential") {
  for (const int m : {1, 2}) {
    const GridSpec grid = GridSpec::for_band(3, 0.8, m);
    const WickContext ctx = WickContext::for_grid(grid);
    Engine engine = make_engine({5, static_cast<std::uint64_t>(m)});
    const Field u = draw_u(engine, grid);
    auto potential = [&](double scale) {
      Field w = u;
      w *= scale;
      double quadratic = 0.0;
      for_each_mode(grid.M, [&](Mode n, int i, int j) {
        quadratic += 0.5 * std::pow(1.0 + n.norm_squared(), 0.8) * std::norm(w.coefficients()(i, j));
      });
      return quadratic - gibbs_log_weight(w, ctx);
    };
    const double h = 1e-5;
    const double numeric = (potential(1 + h) - potential(1 - h)) / (2 * h);
    CHECK(gibbs_virial(u, ctx) == doctest::Approx(numeric).epsilon(1e-6));
    double quadratic = 0.0;
    for_each_mode(grid.M, [&](Mode n, int i, int j) {
      quadratic += std::pow(1.0 + n.norm_squared(), 0.8) * std::norm(u.coefficients()(i, j));
    });
    CHECK(gibbs_virial(u, ctx, false) == doctest::Approx(quadratic).epsilon(1e-12));
  }
}

TEST_CASE("virial mean equals the number of modes") {
  const GridSpec grid = GridSpec::for_band(4, 0.9, 1);
  const WickContext ctx = WickContext::for_grid(grid);
  const double D = 2.0 * half_ball_modes(4).size() - 1.0;
  CHECK(D == 49.0);
  Engine engine = make_engine({6, 0});
  std::vector<double> free_field;
  for (int i = 0; i < 4000; ++i) free_field.push_back(gibbs_virial(draw_u(engine, grid), ctx, false));
  CHECK(std::abs(mean_of(free_field) - D) <= 3.0 * std::sqrt(variance_of(free_field) / free_field.size()));

  const GridSpec one = GridSpec::for_band(0, 0.9, 1);
  const WickContext ctx0 = WickContext::for_grid(one);
  const PcnOptions options{0.5, true};
  ChainState chain = fresh_chain(one, ctx0, options, engine);
  for (int i = 0; i < 2000; ++i) pcn_step(chain, engine, ctx0, options);
  const ChainHistory h = record_chain(chain, engine, ctx0, options, 200000,
                                      {{"virial", [&](const PhaseState& s) { return gibbs_virial(s.u, ctx0); }}});
  const ChainMean v = chain_mean(h.series[0]);
  CHECK(std::abs(v.mean - 1.0) <= 3.0 * v.se);
}

TEST_CASE("pCN with the weight disabled preserves the Gaussian measure") {
  const GridSpec grid = GridSpec::for_band(2, 0.9, 1);
  const WickContext ctx = WickContext::for_grid(grid);
  const PcnOptions prior{0.2, false};
  Engine engine = make_engine({2, 0});
  ChainState chain = fresh_chain(grid, ctx, prior, engine);
  const std::vector<Mode> probe{{0, 0}, {1, 0}, {1, 1}, {0, 2}};
  std::vector<NamedObservable> obs;
  for (const Mode n : probe) obs.push_back(mode_power(n));
  for (const Mode n : probe) obs.push_back(mode_power(n, true));
  const ChainHistory h = record_chain(chain, engine, ctx, prior, 40000, obs);
  CHECK(h.accepted == h.proposed);
  for (std::size_t p = 0; p < probe.size(); ++p) {
    const ChainMean u = chain_mean(h.series[p]);
    CHECK(std::abs(u.mean - std::pow(1.0 + probe[p].norm_squared(), -0.9)) <= 3.0 * u.se);
    // v is refreshed exactly: white noise with unit mode variances.
    const ChainMean v = chain_mean(h.series[probe.size() + p]);
    CHECK(std::abs(v.mean - 1.0) <= 3.0 * v.se);
  }
}

TEST_CASE("v marginal under the weighted chain") {
  const GridSpec grid = GridSpec::for_band(4, 0.9, 1);
  const WickContext ctx = WickContext::for_grid(grid);
  Engine engine = make_engine({3, 0});
  ChainState chain = fresh_chain(grid, ctx, {}, engine);
  std::vector<NamedObservable> obs;
  for (const Mode n : half_ball_modes(4)) obs.push_back(mode_power(n, true));
  const ChainHistory h = record_chain(chain, engine, ctx, {}, 4000, obs);
  for (const auto& series : h.series) {
    Accumulator acc;
    for (double x : series) acc.add(x);
    CHECK(std::abs(acc.mean() - 1.0) <= 3.0 * acc.standard_error());
  }
}

TEST_CASE("acceptance is positive and stationary at N=4, beta=0.2") {
  const GridSpec grid = GridSpec::for_band(4, 0.9, 1);
  const WickContext ctx = WickContext::for_grid(grid);
  Engine engine = make_engine({4, 0});
  ChainState chain = fresh_chain(grid, ctx, {}, engine);
  // The weighted chain needs several thousand sweeps to leave the Gaussian start.
  for (int i = 0; i < 10000; ++i) pcn_step(chain, engine, ctx, {});
  ChainHistory indicator;
  indicator.names = {"accepted"};
  indicator.series.resize(1);
  for (int i = 0; i < 20000; ++i) {
    const long before = chain.accept_count;
    pcn_step(chain, engine, ctx, {});
    indicator.series[0].push_back(chain.accept_count > before ? 1.0 : 0.0);
  }
  const ChainDiagnostics d = chain_diagnostics(indicator);
  CHECK(mean_of(indicator.series[0]) > 0.0);
  CHECK(std::isfinite(d.iat[0]));
  CHECK(d.stationary(3.0));
}

TEST_CASE("one-mode chain matches its analytic density") {
  const GridSpec grid = GridSpec::for_band(0, 0.9, 1);
  const WickContext ctx = WickContext::for_grid(grid);
  REQUIRE(ctx.sigma == 1.0);
  // exp(-x^2/2 - H_4(x; 1)/4), normalized by quadrature.
  auto density = [](double x) { return std::exp(-0.5 * x * x - (x * x * x * x - 6 * x * x + 3) / 4.0); };
  const double lo = -6.0, hi = 6.0;
  const int cells = 24000;
  const double h = (hi - lo) / cells;
  std::vector<double> cdf(cells + 1, 0.0);
  for (int i = 1; i <= cells; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * h * (density(lo + (i - 1) * h) + density(lo + i * h));
  for (double& c : cdf) c /= cdf.back();
  auto F = [&](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double pos = (x - lo) / h;
    const int i = static_cast<int>(pos);
    return cdf[i] + (pos - i) * (cdf[i + 1] - cdf[i]);
  };

  const PcnOptions options{0.5, true};
  Engine engine = make_engine({5, 0});
  ChainState chain = fresh_chain(grid, ctx, options, engine);
  for (int i = 0; i < 2000; ++i) pcn_step(chain, engine, ctx, options);
  const ChainHistory h0 = record_chain(chain, engine, ctx, options, 400000,
                                       {{"u0", [](const PhaseState& s) { return s.u.coefficient({0, 0}).real(); }}});
  const long thin = static_cast<long>(std::ceil(chain_diagnostics(h0).iat[0]));
  std::vector<double> samples;
  for (std::size_t i = 0; i < h0.series[0].size(); i += 2 * thin) samples.push_back(h0.series[0][i]);
  REQUIRE(samples.size() > 1000);
  const double D = ks_statistic(samples, F);
  CHECK(std::sqrt(double(samples.size())) * D <= kKolmogorovCritical1Percent);
}

TEST_CASE("importance sampling") {
  const WickContext ctx = WickContext::make(0.9, 1, 2);
  const std::vector<NamedObservable> obs = default_observables(ctx);
  SUBCASE("unit weights") {
    const WeightedEnsemble e = importance_ensemble(1000, 9, ctx, obs, 1, false);
    CHECK(e.ess == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK_FALSE(e.degenerate);
    CHECK_THROWS(importance_ensemble(999, 9, ctx, obs, 1));
  }
  SUBCASE("agrees with a long pCN chain on one mode") {
    const WickContext one = WickContext::make(0.9, 1, 0);
    const std::vector<NamedObservable> obs0 = default_observables(one);
    REQUIRE(obs0.size() == 4);
    const WeightedEnsemble e = importance_ensemble(20000, 10, one, obs0, 2);
    CHECK_FALSE(e.degenerate);
    const GridSpec grid = GridSpec::for_band(0, 0.9, 1);
    const PcnOptions options{0.5, true};
    Engine engine = make_engine({6, 0});
    ChainState chain = fresh_chain(grid, one, options, engine);
    for (int i = 0; i < 5000; ++i) pcn_step(chain, engine, one, options);
    const ChainHistory h = record_chain(chain, engine, one, options, 200000, obs0);
    for (std::size_t k = 0; k < obs0.size(); ++k) {
      CAPTURE(obs0[k].name);
      const ChainMean c = chain_mean(h.series[k]);
      CHECK(std::abs(c.mean - e.mean[k]) <= 3.0 * std::hypot(c.se, e.standard_error[k]));
    }
  }
  SUBCASE("weights degenerate as N grows") {
    const double ess0 = importance_ensemble(2000, 12, WickContext::make(0.9, 1, 0), {}, 1).ess;
    const WeightedEnsemble e2 = importance_ensemble(2000, 12, ctx, obs, 1);
    CHECK(e2.ess < ess0);
    CHECK(e2.degenerate);
  }
  SUBCASE("resampled independent draws have unit autocorrelation time") {
    const WeightedEnsemble e = importance_ensemble(4000, 11, ctx, obs, 1, false);
    ChainHistory h;
    h.names = e.names;
    h.series = e.values;
    for (double tau : chain_diagnostics(h).iat) CHECK(tau == doctest::Approx(1.0).epsilon(0.3));
  }
}

TEST_CASE("invariance test plumbing") {
  InvarianceOptions options;
  options.N = 4;
  options.gibbs.samples = 200;
  options.gibbs.seed = 12;
  options.gibbs.pilot_sweeps = 4000;
  SUBCASE("T = 0 gives zero z-scores") {
    options.T = 0.0;
    const InvarianceReport r = invariance_test(options);
    REQUIRE(r.stationary);
    for (const auto& row : r.full_step.rows) CHECK(row.z == 0.0);
    CHECK(r.passed);
  }
  SUBCASE("Gaussian control under the linear flow") {
    options.T = 0.5;
    options.dt = 1e-2;
    options.gibbs.pcn.weighted = false;
    options.coupling = 0.0;
    const InvarianceReport r = invariance_test(options);
    CHECK(r.acceptance_rate == 1.0);
    CHECK(r.passed);
    CHECK(r.full_step.rows.size() == 6);
  }
  SUBCASE("sample draws do not depend on the worker count") {
    const std::vector<NamedObservable> obs = default_observables(WickContext::make(0.9, 1, 4));
    GibbsOptions g = options.gibbs;
    g.samples = 20;
    g.chains = 4;
    const GibbsSamples one = gibbs_samples(WickContext::make(0.9, 1, 4), g, obs);
    g.workers = 3;
    const GibbsSamples three = gibbs_samples(WickContext::make(0.9, 1, 4), g, obs);
    REQUIRE(one.states.size() == 20);
    for (std::size_t i = 0; i < 20; ++i)
      CHECK((one.states[i].u.coefficients() == three.states[i].u.coefficients()).all());
  }
}
