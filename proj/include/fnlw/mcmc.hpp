#ifndef FNLW_MCMC_HPP
#define FNLW_MCMC_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fnlw/hermite.hpp"
#include "fnlw/phase_state.hpp"
#include "fnlw/random.hpp"

namespace fnlw {

struct PcnOptions {
  double beta = 0.2;
  bool weighted = true;  // false: log weight identically 0 (pure Gaussian target)
};

/// -G_N(u) / (2m+2), the log density of the truncated Gibbs measure with
/// respect to the Gaussian measure (unnormalized).
double gibbs_log_weight(const Field& u, const WickContext& ctx);

/// Scaling derivative d/de of the potential at (1+e)u, e = 0:
/// <u, (1-Delta)^alpha u> + int u :u^{2m+1}: (second term only if weighted).
/// Its mean under the target equals the number of modes |n| <= N.
double gibbs_virial(const Field& u, const WickContext& ctx, bool weighted = true);

struct ChainState {
  PhaseState state;
  double log_weight = 0.0;
  double step_size = 0.2;
  long accept_count = 0;
  long total_count = 0;
};

ChainState start_chain(const PhaseState& initial, const WickContext& ctx, const PcnOptions& options);

/// One sweep: pCN proposal u' = sqrt(1 - beta^2) u + beta xi, xi ~ mu_alpha,
/// accepted with probability min(1, exp(lw(u') - lw(u))), then an exact
/// refresh of v from its Gaussian marginal.
void pcn_step(ChainState& chain, Engine& engine, const WickContext& ctx, const PcnOptions& options);

struct NamedObservable {
  std::string name;
  std::function<double(const PhaseState&)> fn;
};

/// ||P_k u||^2 for k in {1, N/2, N}, ||v||^2, G_N and the Wick Hamiltonian.
std::vector<NamedObservable> default_observables(const WickContext& ctx);

struct ChainHistory {
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;  // series[observable][sweep]
  long accepted = 0;
  long proposed = 0;
};

/// Runs `sweeps` sweeps, recording every observable after each sweep.
ChainHistory record_chain(ChainState& chain, Engine& engine, const WickContext& ctx,
                          const PcnOptions& options, long sweeps,
                          const std::vector<NamedObservable>& observables);

struct ChainDiagnostics {
  std::vector<std::string> names;
  std::vector<double> iat;           // integrated autocorrelation time (inf if constant)
  std::vector<double> split_half_z;  // first half vs second half, IAT-corrected
  double acceptance_rate = 0.0;
  long length = 0;
  bool stationary(double z_max) const;
  double max_finite_iat() const;
};

ChainDiagnostics chain_diagnostics(const ChainHistory& history);

struct WeightedEnsemble {
  std::vector<std::string> names;
  std::vector<double> log_weights;
  std::vector<std::vector<double>> values;  // values[observable][sample]
  std::vector<double> mean;
  std::vector<double> standard_error;
  double ess = 0.0;
  bool degenerate = false;  // ESS below 5% of K
};

inline constexpr long kMinimumImportanceSamples = 1000;

/// Self-normalized importance sampling: mu_alpha samples weighted by R_N.
WeightedEnsemble importance_ensemble(long K, std::uint64_t seed, const WickContext& ctx,
                                     const std::vector<NamedObservable>& observables, int workers,
                                     bool weighted = true);

struct GibbsOptions {
  long samples = 2000;
  std::uint64_t seed = 0;
  PcnOptions pcn;
  long burnin = 1000;
  long thin = 1;          // lower bound; raised to the measured IAT
  long pilot_sweeps = 50000;
  int chains = 8;
  int workers = 1;
};

struct GibbsSamples {
  std::vector<PhaseState> states;
  ChainDiagnostics pilot;
  long thin = 1;
  long burnin = 0;
  double acceptance_rate = 0.0;
};

/// Independent pCN chains (per-chain seeds), burn-in, thinning by the pilot
/// chain's autocorrelation time.
GibbsSamples gibbs_samples(const WickContext& ctx, const GibbsOptions& options,
                           const std::vector<NamedObservable>& observables);

struct InvarianceRow {
  std::string name;
  double mean_initial = 0.0;
  double mean_final = 0.0;
  double pooled_se = 0.0;
  double z = 0.0;
  double paired_z = 0.0;  // diagnostic: SE of the per-sample differences
};

struct InvarianceRun {
  double dt = 0.0;
  std::vector<InvarianceRow> rows;
  double max_abs_z = 0.0;
};

struct InvarianceOptions {
  double alpha = 0.9;
  int m = 1;
  int N = 8;
  double T = 1.0;
  double dt = 1e-3;
  double coupling = 1.0;
  GibbsOptions gibbs;
  double z_max = 3.0;
  double degrade_slack = 0.5;
  double split_half_z_max = 4.0;
};

struct InvarianceReport {
  InvarianceOptions options;
  long samples = 0;
  long thin = 1;
  long burnin = 0;
  double acceptance_rate = 0.0;
  ChainDiagnostics pilot;
  InvarianceRun full_step;  // dt
  InvarianceRun half_step;  // dt / 2
  // Virial identity on the initial ensemble; a sampler that has not reached
  // the target shows up here even when its chains look stationary.
  double virial_mean = 0.0;
  double virial_se = 0.0;
  double virial_target = 0.0;
  double virial_z = 0.0;
  bool stationary = true;
  bool passed = false;
};

/// Draws Gibbs samples, evolves each to T at dt and dt/2 and compares the
/// observable means at 0 and T with pooled-SE z-scores. With
/// gibbs.pcn.weighted = false and coupling = 0 this is the Gaussian control.
InvarianceReport invariance_test(const InvarianceOptions& options,
                                 const std::vector<NamedObservable>& observables);
InvarianceReport invariance_test(const InvarianceOptions& options);

}  // namespace fnlw

#endif  // FNLW_MCMC_HPP
