#include "fnlw/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fnlw/acceptance.hpp"
#include "fnlw/dynamics.hpp"
#include "fnlw/gaussian_measure.hpp"
#include "fnlw/parallel.hpp"
#include "fnlw/snapshot.hpp"

namespace fnlw {

namespace fs = std::filesystem;

namespace {

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

GridSpec config_grid(const RunConfig& c) {
  GridSpec g{c.N, c.lattice_size(), c.alpha, c.m};
  g.validate();
  return g;
}

Json finish(const fs::path& out, std::string_view command, const RunConfig& c, Json body,
            bool passed, const CsvTable& csv) {
  Json doc = {{"provenance", provenance(c, command)}, {"passed", passed}, {"result", std::move(body)}};
  write_json(out / (std::string(command) + ".json"), doc);
  csv.write(out / (std::string(command) + ".csv"));
  return doc;
}

CommandResult run_sample(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const GridSpec grid = config_grid(c);
  const WickContext ctx = WickContext::for_grid(grid);
  CsvTable csv({"index", "file", "u_l2_squared", "v_l2_squared", "G_N", "H"});
  Json rows = Json::array();
  for (long i = 0; i < c.samples; ++i) {
    const PhaseState s = sample_mu_alpha({c.seed, static_cast<std::uint64_t>(i)}, grid);
    const std::string file = "sample_" + std::to_string(i) + ".fnlw";
    save_state(out / file, s);
    const double u2 = s.u.coefficients().abs2().sum(), v2 = s.v.coefficients().abs2().sum();
    const double gn = g_N(s, ctx), h = wick_hamiltonian(s, ctx);
    csv.row().add(i).add(file).add(u2).add(v2).add(gn).add(h);
    rows.push_back({{"index", i}, {"file", file}, {"u_l2_squared", u2}, {"v_l2_squared", v2},
                    {"G_N", gn}, {"H", h}});
  }
  log << "sample: wrote " << c.samples << " snapshots (N=" << grid.N << ", M=" << grid.M << ")\n";
  Json body = {{"grid", {{"N", grid.N}, {"M", grid.M}, {"alpha", grid.alpha}, {"m", grid.m}}},
               {"sigma", ctx.sigma},
               {"samples", rows}};
  return {true, finish(out, "sample", c, std::move(body), true, csv)};
}

CommandResult run_cauchy(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const CauchyStudy study = cauchy_rate_study(c.alpha, c.m, c.radii, c.n_max, c.samples, c.seed,
                                              resolve_workers(c.workers));
  const bool slope_ok = study.fitted_slope <= study.theoretical_exponent + c.tol.cauchy_slack;
  bool mc_ok = true;
  CsvTable csv({"N", "exact_gap", "mc_gap", "mc_gap_squared", "mc_gap_squared_se", "z"});
  for (const auto& r : study.rows) {
    const double exact2 = r.exact_gap * r.exact_gap;
    const double z = r.mc_gap_squared_se > 0 ? (r.mc_gap_squared - exact2) / r.mc_gap_squared_se : 0.0;
    if (std::abs(z) > c.tol.z_max) mc_ok = false;
    csv.row().add(r.N).add(r.exact_gap).add(r.mc_gap).add(r.mc_gap_squared).add(r.mc_gap_squared_se).add(z);
  }
  log << "cauchy-rate: exact slope " << study.fitted_slope << " vs bound "
      << study.theoretical_exponent + c.tol.cauchy_slack << " " << verdict(slope_ok) << "\n";
  log << "cauchy-rate: Monte Carlo gaps within " << c.tol.z_max << " SE " << verdict(mc_ok) << "\n";
  Json body = to_json(study);
  body["slope_passed"] = slope_ok;
  body["monte_carlo_passed"] = mc_ok;
  const bool ok = slope_ok && mc_ok;
  return {ok, finish(out, "cauchy-rate", c, std::move(body), ok, csv)};
}

CommandResult run_tail(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const WickContext ctx = WickContext::make(c.alpha, c.m, c.N);
  std::vector<double> negative = sample_gn(ctx, c.samples, c.seed, c.workers);
  for (double& x : negative) x = -x;
  std::vector<double> gn(negative.size());
  for (std::size_t i = 0; i < gn.size(); ++i) gn[i] = -negative[i];
  const LowerBoundCheck bound = gn_pointwise_lower_bound_check(gn, ctx);
  const TailStudy tail = tail_study(negative, ctx, c.lambda_grid, 10, c.seed);
  const bool shape_ok = tail.monotone && tail.fit_available && tail.fit.slope < 0.0;
  CsvTable csv({"lambda", "hits", "probability", "censored"});
  for (const auto& r : tail.rows) csv.row().add(r.lambda).add(r.hits).add(r.probability).add(r.censored);
  log << "tail: pointwise bound -G_N <= " << bound.bound << ", violations " << bound.violations << " "
      << verdict(bound.passed()) << "\n";
  log << "tail: monotone " << tail.monotone << ", slope of log P on lambda^(1/(m+1)) "
      << (tail.fit_available ? tail.fit.slope : NAN) << " " << verdict(shape_ok) << "\n";
  const bool ok = bound.passed() && shape_ok;
  Json body = {{"pointwise_bound", to_json(bound)}, {"tail", to_json(tail)}, {"shape_passed", shape_ok}};
  return {ok, finish(out, "tail", c, std::move(body), ok, csv)};
}

CommandResult run_evolve(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const PhaseState start = c.input.empty() ? sample_mu_alpha({c.seed, 0}, config_grid(c))
                                           : load_state(c.input);
  const GridSpec grid = start.grid();
  const WickContext ctx = WickContext::for_grid(grid);
  const TrajectorySample traj = evolve(start, c.T, c.dt, ctx, c.store_every, c.coupling);
  {
    std::ofstream file(out / "trajectory.fnlw", std::ios::binary);
    write_trajectory(file, traj);
  }
  save_state(out / "final.fnlw", traj.states.back());
  double drift = 0.0;
  const double h0 = traj.hamiltonian_log.front();
  for (const double h : traj.hamiltonian_log) drift = std::max(drift, std::abs(h - h0));
  const double relative = h0 != 0.0 ? drift / std::abs(h0) : drift;
  const StrichartzReport str = strichartz_report(traj, c.p, c.q, c.s);
  const bool finite = traj.states.back().u.coefficients().allFinite() &&
                      traj.states.back().v.coefficients().allFinite();
  CsvTable csv({"time", "H"});
  for (std::size_t i = 0; i < traj.size(); ++i) csv.row().add(traj.times[i]).add(traj.hamiltonian_log[i]);
  log << "evolve: T=" << c.T << " dt=" << c.dt << " relative Hamiltonian drift " << relative
      << (finite ? "" : " (non-finite state)") << " " << verdict(finite) << "\n";
  Json body = {{"grid", {{"N", grid.N}, {"M", grid.M}, {"alpha", grid.alpha}, {"m", grid.m}}},
               {"steps", step_count(c.T, c.dt)},
               {"stored", static_cast<long>(traj.size())},
               {"hamiltonian_relative_drift", relative},
               {"strichartz", to_json(str)},
               {"finite", finite}};
  return {finite, finish(out, "evolve", c, std::move(body), finite, csv)};
}

InvarianceOptions invariance_options(const RunConfig& c) {
  InvarianceOptions o;
  o.alpha = c.alpha;
  o.m = c.m;
  o.N = c.N;
  o.T = c.T;
  o.dt = c.dt;
  o.coupling = c.coupling;
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
  return o;
}

void invariance_rows(CsvTable& csv, const std::string& experiment, const InvarianceReport& r) {
  for (const InvarianceRun* run : {&r.full_step, &r.half_step})
    for (const auto& row : run->rows)
      csv.row().add(experiment).add(run->dt).add(row.name).add(row.mean_initial).add(row.mean_final)
          .add(row.pooled_se).add(row.z).add(row.paired_z);
}

CommandResult run_invariance(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const InvarianceOptions gibbs = invariance_options(c);
  InvarianceOptions control = gibbs;
  control.gibbs.pcn.weighted = false;
  control.coupling = 0.0;
  const InvarianceReport main = invariance_test(gibbs);
  const InvarianceReport linear = invariance_test(control);
  CsvTable csv({"experiment", "dt", "observable", "mean_initial", "mean_final", "pooled_se", "z", "paired_z"});
  invariance_rows(csv, "gibbs", main);
  invariance_rows(csv, "gaussian_control", linear);
  for (const auto* r : {&main, &linear}) {
    const char* name = r == &main ? "Gibbs" : "Gaussian/linear control";
    log << "invariance: " << name << " virial mean " << r->virial_mean << " +- " << r->virial_se
        << " (target " << r->virial_target << ")\n";
    if (!r->stationary) {
      log << "invariance: " << name << " sampler failed the stationarity or virial check; aborted\n";
      continue;
    }
    log << "invariance: " << name << " max |z| " << r->full_step.max_abs_z << " (dt), "
        << r->half_step.max_abs_z << " (dt/2), thin " << r->thin << " " << verdict(r->passed) << "\n";
  }
  const bool ok = main.passed && linear.passed;
  Json body = {{"gibbs", to_json(main)}, {"gaussian_control", to_json(linear)}};
  return {ok, finish(out, "invariance", c, std::move(body), ok, csv)};
}

CommandResult run_regularity(const RunConfig& c, const fs::path& out, std::ostream& log) {
  RegularityOptions o;
  o.alpha = c.alpha;
  o.m = c.m;
  o.N = c.N;
  o.samples = c.samples;
  o.seed = c.seed;
  o.t = c.T;
  o.dt_quad = c.dt_quad;
  o.window = {c.fit_lo, c.fit_hi};
  o.products = {{c.k1, c.k, c.k2}};
  o.tol_exact = c.tol.slope_exact;
  o.tol_bound = c.tol.slope_bound;
  o.tol_product = c.tol.slope_product;
  o.workers = resolve_workers(c.workers);
  const RegularityReport report = regularity_report(o);
  CsvTable csv({"object", "kind", "slope", "slope_se", "theoretical", "tolerance", "exact_slope",
                "alpha_threshold", "in_theory", "mean_sup_norm", "passed"});
  for (const auto& f : report.rows) {
    const Json j = to_json(f);
    csv.row().add(f.descriptor).add(j["kind"].get<std::string>()).add(f.slope).add(f.slope_se)
        .add(f.theoretical).add(f.tolerance).add(f.exact_slope).add(f.alpha_threshold).add(f.in_theory)
        .add(f.mean_sup_norm).add(f.passed);
    log << "regularity: " << f.descriptor << " slope " << f.slope << " (theory " << f.theoretical
        << ", tol " << f.tolerance << ") " << verdict(f.passed) << "\n";
  }
  return {report.passed(), finish(out, "regularity", c, to_json(report), report.passed(), csv)};
}

}  // namespace

PicardStudy picard_study(const RunConfig& c) {
  const WickContext ctx = WickContext::make(c.alpha, c.m, c.N);
  PicardOptions options;
  options.max_iters = c.max_iters;
  options.tol = c.picard_tol;
  const SeedSpec seed{c.seed, 0};
  const GridSpec grid = GridSpec::for_band(c.N, c.alpha, c.m);
  const PhaseState data = sample_mu_alpha(seed, grid);
  PicardStudy s;
  const EnhancedData fine = EnhancedData::build(data, ctx, c.T, c.dt_quad, true);
  s.first = picard_solve_w(fine, options);
  s.second = picard_solve_w2(fine, options);
  s.coarse_first = picard_solve_w(seed, c.T, 2.0 * c.dt_quad, ctx, options);
  s.residual_ratio = s.coarse_first.residual / s.first.residual;
  for (std::size_t j = 0; j < fine.nodes(); ++j) {
    const Field a = fine.z2[j] + s.second.w[j];
    s.expansion_gap = std::max(
        s.expansion_gap, std::sqrt((a.coefficients() - s.first.w[j].coefficients()).abs2().sum()));
  }
  s.consistency = full_truncated_consistency(seed, c.T, c.dt, c.dt_quad, ctx, options, c.levels);
  const double lo = c.tol.refinement_ratio_low, hi = c.tol.refinement_ratio_high;
  auto in_band = [&](double r) { return r >= lo && r <= hi; };
  s.contraction_ok = s.first.converged && s.second.converged && s.first.contraction_ratio < 1.0 &&
                     s.second.contraction_ratio < 1.0;
  s.residual_ok = in_band(s.residual_ratio);
  s.consistency_ok = !s.consistency.ratios.empty();
  for (const double r : s.consistency.ratios) s.consistency_ok = s.consistency_ok && in_band(r);
  return s;
}

namespace {

CommandResult run_picard(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const PicardStudy s = picard_study(c);
  CsvTable csv({"order", "iteration", "increment"});
  for (std::size_t i = 0; i < s.first.increments.size(); ++i)
    csv.row().add(1).add(static_cast<long>(i + 1)).add(s.first.increments[i]);
  for (std::size_t i = 0; i < s.second.increments.size(); ++i)
    csv.row().add(2).add(static_cast<long>(i + 1)).add(s.second.increments[i]);
  log << "picard: first order " << s.first.iterations << " iterations, ratio "
      << s.first.contraction_ratio << "; second order " << s.second.iterations << " iterations, ratio "
      << s.second.contraction_ratio << " " << verdict(s.contraction_ok) << "\n";
  log << "picard: residual ratio under dt_quad halving " << s.residual_ratio << " "
      << verdict(s.residual_ok) << "\n";
  log << "picard: direct flow vs z + w gap ratios";
  for (const double r : s.consistency.ratios) log << " " << r;
  log << " " << verdict(s.consistency_ok) << "\n";
  const bool ok = s.passed();
  Json body = {{"first_order", to_json(s.first)},
               {"second_order", to_json(s.second)},
               {"coarse_first_order", to_json(s.coarse_first)},
               {"residual_ratio", s.residual_ratio},
               {"expansion_gap", s.expansion_gap},
               {"consistency", to_json(s.consistency)},
               {"contraction_passed", s.contraction_ok},
               {"residual_passed", s.residual_ok},
               {"consistency_passed", s.consistency_ok}};
  return {ok, finish(out, "picard", c, std::move(body), ok, csv)};
}

CommandResult run_verify(const RunConfig& c, const fs::path& out, std::ostream& log) {
  CsvTable csv({"criterion", "name", "passed", "seconds", "summary"});
  Json rows = Json::array();
  bool ok = true;
  const auto results = run_acceptance(c, all_criteria(), [&](const CriterionResult& r) {
    log << format_criterion(r) << "\n";
    log.flush();
  });
  for (const auto& r : results) {
    ok = ok && r.passed;
    csv.row().add(r.id).add(r.name).add(r.passed).add(r.seconds).add(r.summary);
    rows.push_back({{"criterion", r.id}, {"name", r.name}, {"passed", r.passed},
                    {"summary", r.summary}, {"details", r.details}});
  }
  return {ok, finish(out, "verify", c, {{"criteria", rows}}, ok, csv)};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"sample",     "cauchy-rate", "tail",   "evolve",
                                              "invariance", "regularity",  "picard", "verify"};
  return names;
}

CommandResult run_command(std::string_view command, const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.out.empty()) throw ConfigError("--out is required");
  const fs::path out(config.out);
  fs::create_directories(out);
  if (command == "sample") return run_sample(config, out, log);
  if (command == "cauchy-rate") return run_cauchy(config, out, log);
  if (command == "tail") return run_tail(config, out, log);
  if (command == "evolve") return run_evolve(config, out, log);
  if (command == "invariance") return run_invariance(config, out, log);
  if (command == "regularity") return run_regularity(config, out, log);
  if (command == "picard") return run_picard(config, out, log);
  if (command == "verify") return run_verify(config, out, log);
  throw ConfigError("unknown command '" + std::string(command) + "'");
}

}  // namespace fnlw
