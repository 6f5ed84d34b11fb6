#include "fnlw/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "fnlw/dynamics.hpp"
#include "fnlw/gaussian_measure.hpp"
#include "fnlw/lattice.hpp"
#include "fnlw/parallel.hpp"
#include "fnlw/statistics.hpp"

namespace fnlw {

double gibbs_log_weight(const Field& u, const WickContext& ctx) {
  return -g_N(u, ctx) / ctx.wick_degree();
}

double gibbs_virial(const Field& u, const WickContext& ctx, bool weighted) {
  const int M = u.size();
  double quadratic = 0.0, coupling = 0.0;
  const Field w = weighted ? wick_power_projected(u, ctx.wick_degree() - 1, ctx) : Field(u.grid());
  for_each_mode(M, [&](Mode n, int i, int j) {
    const std::complex<double> c = u.coefficients()(i, j);
    quadratic += std::pow(bracket<double>(n), 2.0 * ctx.alpha) * std::norm(c);
    if (weighted) coupling += std::real(std::conj(c) * w.coefficients()(i, j));
  });
  return quadratic + coupling;
}

namespace {

double log_weight(const Field& u, const WickContext& ctx, const PcnOptions& options) {
  return options.weighted ? gibbs_log_weight(u, ctx) : 0.0;
}

double squared_norm(const Field& f) { return f.coefficients().abs2().sum(); }

}  // namespace

ChainState start_chain(const PhaseState& initial, const WickContext& ctx, const PcnOptions& options) {
  if (!(options.beta >= 0.0 && options.beta <= 1.0))
    throw std::invalid_argument("pCN step size must lie in [0, 1]");
  ChainState chain{initial, log_weight(initial.u, ctx, options), options.beta, 0, 0};
  return chain;
}

void pcn_step(ChainState& chain, Engine& engine, const WickContext& ctx, const PcnOptions& options) {
  const GridSpec grid = chain.state.grid();
  const double beta = chain.step_size;
  Field proposal = draw_u(engine, grid);
  proposal.coefficients() =
      std::sqrt(1.0 - beta * beta) * chain.state.u.coefficients() + beta * proposal.coefficients();
  const double lw = log_weight(proposal, ctx, options);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double draw = uniform(engine);
  ++chain.total_count;
  if (std::log(draw) < lw - chain.log_weight) {
    chain.state.u = std::move(proposal);
    chain.log_weight = lw;
    ++chain.accept_count;
  }
  chain.state.v = draw_v(engine, grid);
}

std::vector<NamedObservable> default_observables(const WickContext& ctx) {
  std::vector<NamedObservable> out;
  std::vector<int> radii;
  for (const int k : {1, ctx.N / 2, ctx.N})
    if (k <= ctx.N && std::find(radii.begin(), radii.end(), k) == radii.end()) radii.push_back(k);
  for (const int k : radii)
    out.push_back({"|P_" + std::to_string(k) + " u|^2",
                   [k](const PhaseState& s) { return squared_norm(project(s.u, k)); }});
  out.push_back({"|v|^2", [](const PhaseState& s) { return squared_norm(s.v); }});
  out.push_back({"G_N", [ctx](const PhaseState& s) { return g_N(s, ctx); }});
  out.push_back({"H", [ctx](const PhaseState& s) { return wick_hamiltonian(s, ctx); }});
  return out;
}

ChainHistory record_chain(ChainState& chain, Engine& engine, const WickContext& ctx,
                          const PcnOptions& options, long sweeps,
                          const std::vector<NamedObservable>& observables) {
  ChainHistory history;
  for (const auto& o : observables) history.names.push_back(o.name);
  history.series.assign(observables.size(), {});
  for (auto& s : history.series) s.reserve(sweeps);
  const long a0 = chain.accept_count, p0 = chain.total_count;
  for (long i = 0; i < sweeps; ++i) {
    pcn_step(chain, engine, ctx, options);
    for (std::size_t k = 0; k < observables.size(); ++k)
      history.series[k].push_back(observables[k].fn(chain.state));
  }
  history.accepted = chain.accept_count - a0;
  history.proposed = chain.total_count - p0;
  return history;
}

bool ChainDiagnostics::stationary(double z_max) const {
  return std::all_of(split_half_z.begin(), split_half_z.end(),
                     [z_max](double z) { return std::abs(z) <= z_max; });
}

double ChainDiagnostics::max_finite_iat() const {
  double worst = 1.0;
  for (const double t : iat)
    if (std::isfinite(t)) worst = std::max(worst, t);
  return worst;
}

ChainDiagnostics chain_diagnostics(const ChainHistory& history) {
  ChainDiagnostics d;
  d.names = history.names;
  d.acceptance_rate =
      history.proposed ? static_cast<double>(history.accepted) / history.proposed : 0.0;
  for (const auto& series : history.series) {
    d.length = static_cast<long>(series.size());
    const double tau = integrated_autocorrelation_time(series);
    d.iat.push_back(tau);
    const std::size_t half = series.size() / 2;
    if (half < 2 || !std::isfinite(tau)) {
      d.split_half_z.push_back(0.0);
      continue;
    }
    const std::span<const double> all(series);
    const auto first = all.first(half), second = all.subspan(half);
    const double var = variance_of(all) * std::max(1.0, tau);
    const double se = std::sqrt(var / first.size() + var / second.size());
    d.split_half_z.push_back((mean_of(first) - mean_of(second)) / se);
  }
  return d;
}

WeightedEnsemble importance_ensemble(long K, std::uint64_t seed, const WickContext& ctx,
                                     const std::vector<NamedObservable>& observables, int workers,
                                     bool weighted) {
  if (K < kMinimumImportanceSamples)
    throw std::invalid_argument("importance ensemble needs K >= " +
                                std::to_string(kMinimumImportanceSamples));
  const GridSpec grid = GridSpec::for_band(ctx.N, ctx.alpha, ctx.m);
  struct Draw {
    double lw = 0.0;
    std::vector<double> values;
  };
  const std::uint64_t stream = derive_seed(seed, 2);
  const auto draws = parallel_map(static_cast<std::size_t>(K), resolve_workers(workers),
                                  [&](std::size_t i) {
                                    const PhaseState s = sample_mu_alpha({stream, i}, grid);
                                    Draw d;
                                    d.lw = weighted ? gibbs_log_weight(s.u, ctx) : 0.0;
                                    for (const auto& o : observables) d.values.push_back(o.fn(s));
                                    return d;
                                  });
  WeightedEnsemble e;
  for (const auto& o : observables) e.names.push_back(o.name);
  e.values.assign(observables.size(), std::vector<double>(K));
  e.log_weights.resize(K);
  for (long i = 0; i < K; ++i) {
    e.log_weights[i] = draws[i].lw;
    for (std::size_t k = 0; k < observables.size(); ++k) e.values[k][i] = draws[i].values[k];
  }
  const double top = *std::max_element(e.log_weights.begin(), e.log_weights.end());
  std::vector<double> w(K);
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < K; ++i) {
    w[i] = std::exp(e.log_weights[i] - top);
    sum += w[i];
    sum_sq += w[i] * w[i];
  }
  e.ess = sum * sum / sum_sq;
  e.degenerate = e.ess < 0.05 * K;
  for (std::size_t k = 0; k < observables.size(); ++k) {
    double mean = 0.0;
    for (long i = 0; i < K; ++i) mean += w[i] * e.values[k][i];
    mean /= sum;
    // Delta-method standard error of the self-normalized estimator.
    double var = 0.0;
    for (long i = 0; i < K; ++i) {
      const double d = w[i] * (e.values[k][i] - mean);
      var += d * d;
    }
    e.mean.push_back(mean);
    e.standard_error.push_back(std::sqrt(var) / sum);
  }
  return e;
}

GibbsSamples gibbs_samples(const WickContext& ctx, const GibbsOptions& options,
                           const std::vector<NamedObservable>& observables) {
  if (options.samples < 1 || options.chains < 1 || options.burnin < 0 || options.thin < 1)
    throw std::invalid_argument("invalid Gibbs sampling options");
  const GridSpec grid = GridSpec::for_band(ctx.N, ctx.alpha, ctx.m);
  const std::uint64_t stream = derive_seed(options.seed, 1);
  auto start = [&](Engine& engine, long burnin) {
    PhaseState initial(draw_u(engine, grid), draw_v(engine, grid));
    ChainState chain = start_chain(initial, ctx, options.pcn);
    for (long i = 0; i < burnin; ++i) pcn_step(chain, engine, ctx, options.pcn);
    return chain;
  };

  GibbsSamples out;
  {
    // Pilot chain on its own stream (index = chains). The chain leaves the
    // Gaussian starting region slowly, so the pilot gets a longer warm-up.
    Engine engine = make_engine({stream, static_cast<std::uint64_t>(options.chains)});
    ChainState chain = start(engine, std::max(options.burnin, options.pilot_sweeps / 5));
    out.pilot = chain_diagnostics(
        record_chain(chain, engine, ctx, options.pcn, options.pilot_sweeps, observables));
  }
  out.thin = std::max(options.thin, static_cast<long>(std::ceil(out.pilot.max_finite_iat())));
  // A burn-in shorter than a few autocorrelation times leaves the Gaussian
  // starting point visible in the first samples.
  out.burnin = std::max(options.burnin, 10 * out.thin);

  const long chains = options.chains;
  struct ChainOutput {
    std::vector<PhaseState> states;
    long accepted = 0, proposed = 0;
  };
  const auto per_chain = parallel_map(
      static_cast<std::size_t>(chains), resolve_workers(options.workers), [&](std::size_t c) {
        const long count = options.samples / chains + (static_cast<long>(c) < options.samples % chains);
        Engine engine = make_engine({stream, c});
        ChainState chain = start(engine, out.burnin);
        const long a0 = chain.accept_count, p0 = chain.total_count;
        ChainOutput result;
        result.states.reserve(count);
        for (long s = 0; s < count; ++s) {
          for (long k = 0; k < out.thin; ++k) pcn_step(chain, engine, ctx, options.pcn);
          result.states.push_back(chain.state);
        }
        result.accepted = chain.accept_count - a0;
        result.proposed = chain.total_count - p0;
        return result;
      });
  long accepted = 0, proposed = 0;
  for (const auto& r : per_chain) {
    out.states.insert(out.states.end(), r.states.begin(), r.states.end());
    accepted += r.accepted;
    proposed += r.proposed;
  }
  out.acceptance_rate = proposed ? static_cast<double>(accepted) / proposed : 0.0;
  return out;
}

namespace {

InvarianceRun compare(double dt, const std::vector<std::vector<double>>& initial,
                      const std::vector<std::vector<double>>& final_values,
                      const std::vector<NamedObservable>& observables) {
  InvarianceRun run;
  run.dt = dt;
  for (std::size_t k = 0; k < observables.size(); ++k) {
    InvarianceRow row;
    row.name = observables[k].name;
    const std::span<const double> a(initial[k]), b(final_values[k]);
    const double n = static_cast<double>(a.size());
    row.mean_initial = mean_of(a);
    row.mean_final = mean_of(b);
    row.pooled_se = std::sqrt(variance_of(a) / n + variance_of(b) / n);
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = b[i] - a[i];
    const double paired_se = std::sqrt(variance_of(diff) / n);
    const double delta = row.mean_final - row.mean_initial;
    row.z = row.pooled_se > 0 ? delta / row.pooled_se : (delta == 0 ? 0.0 : INFINITY);
    row.paired_z = paired_se > 0 ? delta / paired_se : (delta == 0 ? 0.0 : INFINITY);
    run.max_abs_z = std::max(run.max_abs_z, std::abs(row.z));
    run.rows.push_back(row);
  }
  return run;
}

}  // namespace

InvarianceReport invariance_test(const InvarianceOptions& options,
                                 const std::vector<NamedObservable>& observables) {
  if (!(options.T >= 0.0) || !(options.dt > 0.0))
    throw std::invalid_argument("invariance test needs T >= 0 and dt > 0");
  const WickContext ctx = WickContext::make(options.alpha, options.m, options.N);
  const long steps = step_count(options.T, options.dt);

  InvarianceReport report;
  report.options = options;
  const GibbsSamples gibbs = gibbs_samples(ctx, options.gibbs, observables);
  report.samples = static_cast<long>(gibbs.states.size());
  report.thin = gibbs.thin;
  report.burnin = gibbs.burnin;
  report.acceptance_rate = gibbs.acceptance_rate;
  report.pilot = gibbs.pilot;
  {
    std::vector<double> virial;
    for (const PhaseState& s : gibbs.states)
      virial.push_back(gibbs_virial(s.u, ctx, options.gibbs.pcn.weighted));
    double tau = integrated_autocorrelation_time(virial);
    if (!std::isfinite(tau) || tau < 1.0) tau = 1.0;
    report.virial_mean = mean_of(virial);
    report.virial_se = std::sqrt(variance_of(virial) * tau / virial.size());
    report.virial_target = 2.0 * half_ball_modes(ctx.N).size() - 1.0;
    report.virial_z = (report.virial_mean - report.virial_target) / report.virial_se;
  }
  report.stationary = gibbs.pilot.stationary(options.split_half_z_max) &&
                      std::abs(report.virial_z) <= options.z_max;
  if (!report.stationary) return report;

  const GridSpec grid = GridSpec::for_band(ctx.N, ctx.alpha, ctx.m);
  const TruncatedFlow full(ctx, grid.M, options.dt, options.coupling);
  const TruncatedFlow half(ctx, grid.M, 0.5 * options.dt, options.coupling);
  struct Values {
    std::vector<double> initial, at_full, at_half;
  };
  const auto values = parallel_map(
      gibbs.states.size(), resolve_workers(options.gibbs.workers), [&](std::size_t i) {
        Values v;
        const PhaseState& s0 = gibbs.states[i];
        PhaseState a = s0, b = s0;
        full.advance(a, steps);
        half.advance(b, 2 * steps);
        for (const auto& o : observables) {
          v.initial.push_back(o.fn(s0));
          v.at_full.push_back(o.fn(a));
          v.at_half.push_back(o.fn(b));
        }
        return v;
      });
  const std::size_t K = values.size(), P = observables.size();
  std::vector<std::vector<double>> initial(P, std::vector<double>(K)), at_full = initial,
                                   at_half = initial;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t k = 0; k < P; ++k) {
      initial[k][i] = values[i].initial[k];
      at_full[k][i] = values[i].at_full[k];
      at_half[k][i] = values[i].at_half[k];
    }
  report.full_step = compare(options.dt, initial, at_full, observables);
  report.half_step = compare(0.5 * options.dt, initial, at_half, observables);
  report.passed = report.full_step.max_abs_z <= options.z_max &&
                  report.half_step.max_abs_z <= options.z_max &&
                  report.half_step.max_abs_z <= report.full_step.max_abs_z + options.degrade_slack;
  return report;
}

InvarianceReport invariance_test(const InvarianceOptions& options) {
  return invariance_test(options,
                         default_observables(WickContext::make(options.alpha, options.m, options.N)));
}

}  // namespace fnlw
