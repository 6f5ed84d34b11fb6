#include "fnlw/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "fnlw/commands.hpp"
#include "fnlw/diagnostics.hpp"
#include "fnlw/dynamics.hpp"
#include "fnlw/gaussian_measure.hpp"
#include "fnlw/hermite.hpp"
#include "fnlw/lattice.hpp"
#include "fnlw/mcmc.hpp"
#include "fnlw/parallel.hpp"
#include "fnlw/statistics.hpp"

namespace fnlw {

namespace fs = std::filesystem;

namespace {

struct Text {
  std::ostringstream os;
  Text() { os.precision(4); }
  template <typename T>
  Text& operator<<(const T& v) {
    os << v;
    return *this;
  }
  std::string str() const { return os.str(); }
};

CriterionResult criterion(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

double binomial(int k, int l) { return factorial(k) / (factorial(l) * factorial(k - l)); }

double relative_distance(const PhaseState& a, const PhaseState& b) {
  const double diff = (a.u.coefficients() - b.u.coefficients()).abs2().sum() +
                      (a.v.coefficients() - b.v.coefficients()).abs2().sum();
  const double ref = b.u.coefficients().abs2().sum() + b.v.coefficients().abs2().sum();
  return std::sqrt(diff / ref);
}

// 1. Hermite identities, errors relative to the homogeneous scale (|x| + sqrt(s))^k.
CriterionResult hermite_suite(const RunConfig& base) {
  CriterionResult r = criterion(1, "Hermite identity suite");
  std::mt19937_64 rng(base.seed);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), us(0.1, 4.0);
  double hom = 0, bin = 0, der = 0, table = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = ux(rng), y = ux(rng), s = us(rng);
    const double rs = std::sqrt(s);
    auto scale = [&](int k, double a) { return std::pow(std::abs(a) + rs + 1e-300, k); };
    for (int k = 0; k <= 8; ++k) {
      hom = std::max(hom, std::abs(hermite(k, rs * x, s) - std::pow(s, 0.5 * k) * hermite(k, x, 1.0)) /
                              scale(k, rs * x));
      double sum = 0.0;
      for (int l = 0; l <= k; ++l) sum += binomial(k, l) * std::pow(x, k - l) * hermite(l, y, s);
      bin = std::max(bin, std::abs(hermite(k, x + y, s) - sum) / scale(k, std::abs(x) + std::abs(y)));
      if (k >= 1) {
        // d/dx H_k from the coefficient form against k H_{k-1} from the recurrence.
        const auto c = hermite_coefficients(k, s);
        double d = 0.0;
        for (int j = k; j >= 1; --j) d = d * x + j * c[j];
        der = std::max(der, std::abs(d - k * hermite(k - 1, x, s)) / scale(k - 1, x));
      }
    }
    const double expected[5] = {1.0, x, x * x - s, x * x * x - 3 * s * x,
                                x * x * x * x - 6 * s * x * x + 3 * s * s};
    for (int k = 0; k <= 4; ++k)
      table = std::max(table, std::abs(hermite(k, x, s) - expected[k]) / scale(k, x));
  }
  const double worst = std::max({hom, bin, der, table});
  r.passed = worst <= base.tol.hermite_relative;
  r.summary = (Text() << "max relative error " << worst << " (homogeneity " << hom << ", binomial "
                      << bin << ", derivative " << der << ", table " << table << ") <= "
                      << base.tol.hermite_relative).str();
  r.details = {{"homogeneity", hom}, {"binomial", bin}, {"derivative", der}, {"table", table},
               {"tolerance", base.tol.hermite_relative}};
  return r;
}

// 2. Monte Carlo E[(G_M - G_N)^2] against the exact covariance.
CriterionResult covariance_oracle(const RunConfig& base) {
  CriterionResult r = criterion(2, "Covariance oracle");
  const long K = 10000;
  const int workers = resolve_workers(base.workers);
  const double origin = exact_gn_covariance(0.9, 1, 0, 0);
  bool ok = origin == 24.0;
  double worst_z = 0.0;
  Json rows = Json::array();
  for (const double alpha : {0.8, 0.9, 0.95})
    for (const auto& [n, m] : {std::pair{1, 2}, std::pair{2, 4}, std::pair{4, 8}}) {
      const std::vector<int> radii{n, m};
      const auto pairs = parallel_map(static_cast<std::size_t>(K), workers, [&](std::size_t i) {
        const auto g = paired_gn({base.seed, i}, alpha, 1, radii);
        return (g[1] - g[0]) * (g[1] - g[0]);
      });
      Accumulator acc;
      for (const double v : pairs) acc.add(v);
      const double exact = exact_gn_gap_squared(alpha, 1, n, m);
      const double z = (acc.mean() - exact) / acc.standard_error();
      worst_z = std::max(worst_z, std::abs(z));
      ok = ok && std::abs(z) <= base.tol.z_max;
      rows.push_back({{"alpha", alpha}, {"N", n}, {"M", m}, {"exact", exact}, {"mc", acc.mean()},
                      {"se", acc.standard_error()}, {"z", z}});
    }
  r.passed = ok;
  r.summary = (Text() << "9 (alpha, N, M) cases, max |z| " << worst_z << " <= " << base.tol.z_max
                      << "; E[G_0^2] = " << origin << " (exact 24)").str();
  r.details = {{"origin", origin}, {"rows", rows}};
  return r;
}

// 3. Exact-oracle Cauchy rate slope.
CriterionResult cauchy_rate(const RunConfig& base) {
  CriterionResult r = criterion(3, "Cauchy rate");
  const std::vector<int> radii{4, 8, 16, 32};
  const CauchyStudy s = cauchy_rate_study(0.95, 1, radii, 64, 0, base.seed, resolve_workers(base.workers));
  const double bound = s.theoretical_exponent + base.tol.cauchy_slack;
  r.passed = s.fitted_slope <= bound;
  r.summary = (Text() << "exact slope " << s.fitted_slope << " <= " << bound << " (exponent "
                      << s.theoretical_exponent << ", N_max = 64)").str();
  r.details = to_json(s);
  return r;
}

// 4. Deterministic pointwise lower bound.
CriterionResult pointwise_bound(const RunConfig& base) {
  CriterionResult r = criterion(4, "Pointwise bound");
  Json rows = Json::array();
  bool ok = true;
  long total = 0, violations = 0;
  for (const double alpha : {0.8, 0.9})
    for (const int N : {4, 8}) {
      const WickContext ctx = WickContext::make(alpha, 1, N);
      const LowerBoundCheck c = gn_pointwise_lower_bound_check(
          sample_gn(ctx, 10000, base.seed, base.workers), ctx);
      const double six_sigma2 = 6.0 * ctx.sigma * ctx.sigma;
      ok = ok && c.passed() && std::abs(c.bound - six_sigma2) <= 1e-12 * six_sigma2;
      total += c.samples;
      violations += c.violations;
      Json row = to_json(c);
      row["alpha"] = alpha;
      row["N"] = N;
      rows.push_back(row);
    }
  r.passed = ok;
  r.summary = (Text() << violations << " violations of -G_N <= 6 sigma^2 in " << total << " samples").str();
  r.details = {{"rows", rows}};
  return r;
}

// 5. Tail shape of -G_N.
CriterionResult tail_shape(const RunConfig& base) {
  CriterionResult r = criterion(5, "Tail study");
  const WickContext ctx = WickContext::make(0.9, 1, 8);
  std::vector<double> negative = sample_gn(ctx, 100000, base.seed, base.workers);
  for (double& x : negative) x = -x;
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(25.0 * i);
  const TailStudy t = tail_study(negative, ctx, grid, 10, base.seed);
  r.passed = t.monotone && t.fit_available && t.fit.slope < 0.0;
  r.summary = (Text() << "P(-G_N > lambda) monotone: " << (t.monotone ? "yes" : "no")
                      << ", slope of log P on lambda^(1/2) " << (t.fit_available ? t.fit.slope : NAN)
                      << " +- " << t.fit.slope_se << " < 0").str();
  r.details = to_json(t);
  return r;
}

// 6. Hypercontractivity of Wiener chaos elements.
CriterionResult wiener_chaos(const RunConfig& base) {
  CriterionResult r = criterion(6, "Wiener chaos estimate");
  const long K = 10000;
  const GridSpec grid = GridSpec::for_band(8, 0.9, 1);
  const WickContext ctx = WickContext::for_grid(grid);
  // Unit-norm test function with random coefficients on the band.
  std::mt19937_64 rng(base.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Field f(grid);
  for (const Mode n : half_ball_modes(8))
    f.set_symmetric(n, {normal(rng), n.norm_squared() == 0 ? 0.0 : normal(rng)});
  f *= 1.0 / std::sqrt(f.coefficients().abs2().sum());
  const auto wf = parallel_map(static_cast<std::size_t>(K), resolve_workers(base.workers),
                               [&](std::size_t i) { return white_noise_pairing(f, {base.seed, i}); });
  const std::vector<double> gn = sample_gn(ctx, K, base.seed, base.workers);
  const std::vector<double> p{4.0};
  const auto a = wiener_chaos_check(wf, 1, p, base.tol.chaos_slack);
  const auto b = wiener_chaos_check(gn, 2 * ctx.m + 2, p, base.tol.chaos_slack);
  r.passed = a[0].passed && b[0].passed;
  r.summary = (Text() << "||W_f||_4/||W_f||_2 = " << a[0].ratio << " (bound " << a[0].bound
                      << "), ||G_N||_4/||G_N||_2 = " << b[0].ratio << " (bound " << b[0].bound << ")").str();
  r.details = {{"white_noise", to_json(a)}, {"gn", to_json(b)}};
  return r;
}

// 7. Integrator properties at N = 16.
CriterionResult integrator(const RunConfig& base) {
  CriterionResult r = criterion(7, "Integrator");
  const GridSpec grid = GridSpec::for_band(16, 0.9, 1);
  const WickContext ctx = WickContext::for_grid(grid);
  double reversibility = 0.0, quadratic = 0.0;
  for (std::uint64_t i = 0; i < 4; ++i) {
    const PhaseState s = sample_mu_alpha({base.seed, i}, grid);
    for (const double dt : {1e-2, 1e-3})
      reversibility = std::max(reversibility, relative_distance(strang_step(strang_step(s, dt, ctx), -dt, ctx), s));
    const double e0 = quadratic_energy(s);
    for (const double t : {0.1, 1.0, 17.3})
      quadratic = std::max(quadratic, std::abs(quadratic_energy(linear_propagate(s, t)) - e0) / e0);
  }
  const PhaseState s = sample_mu_alpha({base.seed, 0}, grid);
  const TrajectorySample traj = evolve(s, 1.0, 1e-3, ctx, 10);
  double drift = 0.0;
  for (const double h : traj.hamiltonian_log) drift = std::max(drift, std::abs(h - traj.hamiltonian_log[0]));
  drift /= std::abs(traj.hamiltonian_log[0]);
  auto final_state = [&](double dt) { return evolve(s, 0.5, dt, ctx, 1'000'000).states.back(); };
  const PhaseState a = final_state(0.02), b = final_state(0.01), c = final_state(0.005);
  const double order = std::log2(relative_distance(a, b) / relative_distance(b, c));
  const bool rev_ok = reversibility <= base.tol.reversibility;
  const bool quad_ok = quadratic <= base.tol.quadratic_energy;
  const bool drift_ok = drift < base.tol.hamiltonian_drift;
  const bool order_ok = order >= base.tol.min_order;
  r.passed = rev_ok && quad_ok && drift_ok && order_ok;
  auto mark = [](bool ok) { return ok ? "" : " [fails]"; };
  r.summary = (Text() << "reversibility " << reversibility << mark(rev_ok) << ", linear energy "
                      << quadratic << mark(quad_ok) << ", Hamiltonian drift " << drift << " vs "
                      << base.tol.hamiltonian_drift << mark(drift_ok) << ", order " << order
                      << mark(order_ok)).str();
  r.details = {{"reversibility", reversibility}, {"quadratic_energy", quadratic},
               {"hamiltonian_drift", drift},     {"order", order},
               {"reversibility_passed", rev_ok}, {"quadratic_energy_passed", quad_ok},
               {"drift_passed", drift_ok},       {"order_passed", order_ok}};
  return r;
}

RunConfig scratch_config(const RunConfig& base, const std::string& command) {
  RunConfig c = RunConfig::defaults(command);
  c.seed = base.seed;
  c.workers = base.workers;
  c.tol = base.tol;
  return c;
}

// 8. Gibbs invariance under the truncated flow, with the Gaussian control.
CriterionResult invariance(const RunConfig& base) {
  CriterionResult r = criterion(8, "Gibbs invariance");
  RunConfig c = scratch_config(base, "invariance");
  c.alpha = 0.9;
  c.m = 1;
  c.N = 8;
  c.T = 1.0;
  c.dt = 1e-3;
  c.samples = 2000;
  InvarianceOptions o;
  o.alpha = c.alpha;
  o.m = c.m;
  o.N = c.N;
  o.T = c.T;
  o.dt = c.dt;
  o.gibbs.samples = c.samples;
  o.gibbs.seed = c.seed;
  o.gibbs.pcn.beta = c.beta;
  o.gibbs.burnin = c.burnin;
  o.gibbs.thin = c.thin;
  o.gibbs.pilot_sweeps = c.pilot;
  o.gibbs.chains = c.chains;
  o.gibbs.workers = c.workers;
  o.z_max = c.tol.z_max;
  o.degrade_slack = c.tol.degrade_slack;
  o.split_half_z_max = c.tol.split_half_z_max;
  const InvarianceReport main = invariance_test(o);
  InvarianceOptions control = o;
  control.gibbs.pcn.weighted = false;
  control.coupling = 0.0;
  const InvarianceReport linear = invariance_test(control);
  r.passed = main.passed && linear.passed;
  r.summary = (Text() << "Gibbs max |z| " << main.full_step.max_abs_z << " (dt), "
                      << main.half_step.max_abs_z << " (dt/2)" << (main.stationary ? "" : " non-stationary")
                      << ", virial z " << main.virial_z
                      << "; control max |z| " << linear.full_step.max_abs_z << ", "
                      << linear.half_step.max_abs_z << (linear.stationary ? "" : " non-stationary")
                      << "; K = " << main.samples << ", beta " << c.beta << ", thin " << main.thin)
                  .str();
  r.details = {{"gibbs", to_json(main)}, {"gaussian_control", to_json(linear)}};
  return r;
}

// 9. Regularity exponents of the stochastic objects.
CriterionResult regularity(const RunConfig& base) {
  CriterionResult r = criterion(9, "Regularity exponents");
  RegularityOptions o;
  o.alpha = 0.95;
  o.m = 1;
  o.N = 32;
  o.samples = 1000;
  o.seed = base.seed;
  o.t = 1.0;
  o.dt_quad = 0.02;
  o.products = {{1, 3, 1}};
  o.tol_exact = base.tol.slope_exact;
  o.tol_bound = base.tol.slope_bound;
  o.tol_product = base.tol.slope_product;
  o.workers = resolve_workers(base.workers);
  const RegularityReport report = regularity_report(o);
  // Criterion rows: :z:, :z^3:, D(:z^3:), the product. :z^2: is reported only.
  bool ok = true;
  Text t;
  for (const auto& f : report.rows) {
    const bool counted = f.descriptor != ":z^2:";
    if (counted) ok = ok && f.passed;
    t << f.descriptor << " " << f.slope << (f.kind == FitKind::exact_law ? " vs " : " <= ")
      << f.theoretical + (f.kind == FitKind::exact_law ? 0.0 : f.tolerance)
      << (f.passed ? "" : (counted ? " [fails]" : " [reported]")) << "; ";
  }
  r.passed = ok;
  r.summary = t.str();
  if (r.summary.size() >= 2) r.summary.resize(r.summary.size() - 2);
  r.details = to_json(report);
  return r;
}

// 10. Picard fixed points and the direct-flow consistency.
CriterionResult picard(const RunConfig& base) {
  CriterionResult r = criterion(10, "Picard fixed point");
  RunConfig c = scratch_config(base, "picard");
  c.alpha = 0.95;
  c.m = 1;
  c.N = 8;
  c.T = 0.05;
  c.dt_quad = 0.0025;
  c.dt = 0.00125;
  const PicardStudy s = picard_study(c);
  r.passed = s.passed();
  Text t;
  t << "increment ratio " << s.first.contraction_ratio << " / " << s.second.contraction_ratio
    << " (first/second order) < 1, residual ratio " << s.residual_ratio << ", consistency gap ratio";
  for (const double x : s.consistency.ratios) t << " " << x;
  t << " in [" << c.tol.refinement_ratio_low << ", " << c.tol.refinement_ratio_high << "]";
  r.summary = t.str();
  r.details = {{"first_order", to_json(s.first)},   {"second_order", to_json(s.second)},
               {"residual_ratio", s.residual_ratio}, {"expansion_gap", s.expansion_gap},
               {"consistency", to_json(s.consistency)}};
  return r;
}

struct SeriesMean {
  double mean, se;
};

SeriesMean series_mean(const std::vector<double>& x) {
  const double tau = integrated_autocorrelation_time(x);
  return {mean_of(x), std::sqrt(variance_of(x) * tau / x.size())};
}

// 11. Sampler checks.
CriterionResult samplers(const RunConfig& base) {
  CriterionResult r = criterion(11, "Samplers");
  // One mode: pCN against the analytic density exp(-x^2/2 - H_4(x;1)/4).
  const GridSpec g0 = GridSpec::for_band(0, 0.9, 1);
  const WickContext c0 = WickContext::for_grid(g0);
  auto density = [](double x) { return std::exp(-0.5 * x * x - (x * x * x * x - 6 * x * x + 3) / 4.0); };
  const double lo = -6.0, hi = 6.0;
  const int cells = 24000;
  const double h = (hi - lo) / cells;
  std::vector<double> cdf(cells + 1, 0.0);
  for (int i = 1; i <= cells; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * h * (density(lo + (i - 1) * h) + density(lo + i * h));
  for (double& v : cdf) v /= cdf.back();
  auto F = [&](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double pos = (x - lo) / h;
    const int i = std::min(cells - 1, static_cast<int>(pos));
    return cdf[i] + (pos - i) * (cdf[i + 1] - cdf[i]);
  };
  const PcnOptions one_mode{0.5, true};
  Engine e0 = make_engine({derive_seed(base.seed, 11), 0});
  ChainState chain0 = start_chain(PhaseState(draw_u(e0, g0), draw_v(e0, g0)), c0, one_mode);
  for (int i = 0; i < 2000; ++i) pcn_step(chain0, e0, c0, one_mode);
  const ChainHistory h0 = record_chain(
      chain0, e0, c0, one_mode, 400000,
      {{"u0", [](const PhaseState& s) { return s.u.coefficient({0, 0}).real(); }}});
  const long thin = 2 * static_cast<long>(std::ceil(integrated_autocorrelation_time(h0.series[0])));
  std::vector<double> draws;
  for (std::size_t i = 0; i < h0.series[0].size(); i += thin) draws.push_back(h0.series[0][i]);
  const double ks = std::sqrt(double(draws.size())) * ks_statistic(draws, F);
  const bool gof_ok = ks <= kKolmogorovCritical1Percent;

  // N = 2: importance sampling against a long pCN chain.
  const WickContext c2 = WickContext::make(0.9, 1, 2);
  const GridSpec g2 = GridSpec::for_band(2, 0.9, 1);
  const auto obs = default_observables(c2);
  const WeightedEnsemble is = importance_ensemble(20000, base.seed, c2, obs, base.workers);
  Engine e2 = make_engine({derive_seed(base.seed, 12), 0});
  ChainState chain2 = start_chain(PhaseState(draw_u(e2, g2), draw_v(e2, g2)), c2, {});
  for (int i = 0; i < 10000; ++i) pcn_step(chain2, e2, c2, {});
  const ChainHistory h2 = record_chain(chain2, e2, c2, {}, 200000, obs);
  bool agree = true;
  double worst = 0.0;
  Json rows = Json::array();
  for (std::size_t k = 0; k < obs.size(); ++k) {
    const SeriesMean m = series_mean(h2.series[k]);
    const double z = (m.mean - is.mean[k]) / std::hypot(m.se, is.standard_error[k]);
    worst = std::max(worst, std::abs(z));
    agree = agree && std::abs(z) <= base.tol.z_max;
    rows.push_back({{"observable", obs[k].name}, {"pcn_mean", m.mean}, {"pcn_se", m.se},
                    {"importance_mean", is.mean[k]}, {"importance_se", is.standard_error[k]}, {"z", z}});
  }
  r.passed = gof_ok && agree;
  r.summary = (Text() << "one-mode KS sqrt(n) D = " << ks << " <= " << kKolmogorovCritical1Percent
                      << (gof_ok ? "" : " [fails]") << " (n = " << draws.size()
                      << "); N=2 pCN vs importance max |z| " << worst << (agree ? "" : " [fails]")
                      << ", ESS " << is.ess << " of 20000" << (is.degenerate ? " (degenerate)" : ""))
                  .str();
  r.details = {{"ks_scaled", ks}, {"ks_samples", static_cast<long>(draws.size())}, {"thin", thin},
               {"importance", to_json(is)}, {"agreement", rows}};
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// 12. Bit-identical JSON across reruns and worker counts.
CriterionResult reproducibility(const RunConfig& base) {
  CriterionResult r = criterion(12, "Reproducibility");
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> runs{
      {"sample", {{"N", "4"}, {"samples", "2"}}},
      {"cauchy-rate", {{"samples", "200"}, {"radii", "2,4"}, {"n_max", "8"}}},
      {"tail", {{"N", "4"}, {"samples", "2000"}}},
      {"evolve", {{"N", "4"}, {"T", "0.1"}, {"dt", "0.01"}, {"store_every", "5"}}},
      {"invariance", {{"N", "4"}, {"samples", "40"}, {"T", "0.1"}, {"dt", "0.01"}, {"pilot", "2000"},
                      {"chains", "4"}, {"burnin", "200"}}},
      {"regularity", {{"N", "8"}, {"samples", "500"}, {"T", "0.2"}, {"dt_quad", "0.05"}}},
      {"picard", {{"N", "4"}}},
  };
  const fs::path root = fs::temp_directory_path() / ("fnlw-repro-" + std::to_string(base.seed));
  fs::remove_all(root);
  bool ok = true;
  Json rows = Json::array();
  std::ostringstream sink;
  for (const auto& [command, overrides] : runs) {
    std::vector<std::string> docs;
    for (const int workers : {1, 3, 1}) {
      RunConfig c = scratch_config(base, command);
      for (const auto& [k, v] : overrides) c.set(k, v);
      c.workers = workers;
      c.out = (root / (command + "-" + std::to_string(docs.size()))).string();
      run_command(command, c, sink);
      docs.push_back(read_file(fs::path(c.out) / (command + ".json")));
    }
    const bool same = !docs[0].empty() && docs[0] == docs[1] && docs[0] == docs[2];
    ok = ok && same;
    rows.push_back({{"command", command}, {"identical", same}, {"bytes", static_cast<long>(docs[0].size())}});
  }
  fs::remove_all(root);
  r.passed = ok;
  r.summary = (Text() << runs.size() << " commands rerun at 1, 3 and 1 workers: JSON "
                      << (ok ? "bit-identical" : "differs")).str();
  r.details = {{"rows", rows}};
  return r;
}

}  // namespace

std::vector<int> all_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}; }

CriterionResult run_criterion(int id, const RunConfig& base) {
  using Fn = CriterionResult (*)(const RunConfig&);
  static const Fn table[] = {hermite_suite, covariance_oracle, cauchy_rate, pointwise_bound,
                             tail_shape,    wiener_chaos,      integrator,  invariance,
                             regularity,    picard,            samplers,    reproducibility};
  if (id < 1 || id > 12) throw ConfigError("unknown acceptance criterion " + std::to_string(id));
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = table[id - 1](base);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const RunConfig& base, std::span<const int> ids,
                                            const std::function<void(const CriterionResult&)>& progress) {
  std::vector<CriterionResult> out;
  for (const int id : ids) {
    out.push_back(run_criterion(id, base));
    if (progress) progress(out.back());
  }
  return out;
}

std::string format_criterion(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d  ", r.passed ? "PASS" : "FAIL", r.id);
  char tail[48];
  std::snprintf(tail, sizeof tail, " (%.1f s)", r.seconds);
  return std::string(head) + r.name + ": " + r.summary + tail;
}

}  // namespace fnlw
