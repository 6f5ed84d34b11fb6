#ifndef FNLW_GAUSSIAN_MEASURE_HPP
#define FNLW_GAUSSIAN_MEASURE_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fnlw/hermite.hpp"
#include "fnlw/phase_state.hpp"
#include "fnlw/random.hpp"
#include "fnlw/statistics.hpp"

namespace fnlw {

/// Standard complex Gaussians g_{0,n}, g_{1,n} for the modes of
/// half_ball_modes(N), in that order. For n != 0, real and imaginary parts are
/// independent N(0, 1/2); the origin is real N(0, 1). The draw order per mode
/// is g0.re, g0.im, g1.re, g1.im (origin: g0, g1), so the draws for radius N
/// are a prefix of the draws for any larger radius.
struct GaussianCoefficients {
  std::vector<std::complex<double>> g0;
  std::vector<std::complex<double>> g1;
};

GaussianCoefficients draw_gaussian_coefficients(const SeedSpec& seed, int N);

/// Field with f^(n) = weight(n) * g_n on |n| <= N and Hermitian extension.
Field gaussian_field(const GridSpec& grid, std::span<const std::complex<double>> g,
                     const std::function<double(Mode)>& weight);

/// Draws one sample of the Gaussian measure on (u, v):
/// u^(n) = g_{0,n} / <n>^alpha, v^(n) = g_{1,n}, |n| <= grid.N.
PhaseState sample_mu_alpha(const SeedSpec& seed, const GridSpec& grid);

/// u-component only, drawn directly from an engine (used as pCN innovation).
Field draw_u(Engine& engine, const GridSpec& grid);
/// v-component only: band-limited white noise with unit mode variances.
Field draw_v(Engine& engine, const GridSpec& grid);

/// W_f = sum_n f^(n) conj(g_n) with g_n = g_{0,n} of `seed`; Gaussian with
/// variance ||f||_{L^2}^2.
double white_noise_pairing(const Field& f, const SeedSpec& seed);

/// G_N(u) = integral of :(P_N u)^{2m+2}: under the normalized measure.
double g_N(const PhaseState& state, const WickContext& ctx);
double g_N(const Field& u, const WickContext& ctx);

/// G_N of K independent mu_alpha samples (sample indices 0..K-1), in index order.
std::vector<double> sample_gn(const WickContext& ctx, long K, std::uint64_t master_seed,
                              int workers);

/// R_N(u) = exp(-G_N / (2m+2)).
double r_N(const PhaseState& state, const WickContext& ctx);

/// Upper bound c(m) sigma^{m+1} for -G_N with c(m) = -hermite_min(2m+2).
double gn_lower_bound(const WickContext& ctx);

/// gamma_{alpha,N} = sum_{|n| <= N} <n>^{-2 alpha} e_n on the given grid.
Field gamma_kernel(const GridSpec& grid);
Field gamma_kernel(double alpha, int N);

/// E[G_N G_M] = (2m+2)! * integral gamma_{alpha, min(N,M)}^{2m+2}.
double exact_gn_covariance(double alpha, int m, int n_low, int n_high);

/// E[(G_high - G_low)^2] from the exact covariance.
double exact_gn_gap_squared(double alpha, int m, int n_low, int n_high);

/// G_N for each radius in `radii` on one sample drawn at max(radii) (paired
/// coupling: every G_N is evaluated on P_N of the same u).
std::vector<double> paired_gn(const SeedSpec& seed, double alpha, int m,
                              std::span<const int> radii);

struct CauchyRow {
  int N = 0;
  double exact_gap = 0.0;  // ||G_Nmax - G_N||_{L^2}, exact oracle
  double mc_gap = 0.0;     // Monte Carlo estimate of the same
  double mc_gap_squared = 0.0;
  double mc_gap_squared_se = 0.0;
};

struct CauchyStudy {
  double alpha = 0.0;
  int m = 1;
  int N_max = 0;
  long samples = 0;
  std::uint64_t master_seed = 0;
  std::vector<CauchyRow> rows;
  double fitted_slope = 0.0;
  double fitted_slope_se = 0.0;
  double theoretical_exponent = 0.0;  // 1 - 2 alpha + m/(m+1)
  bool in_theory = false;             // alpha > 1 - 1/(2m+2)
};

/// Cauchy-rate study of G_N. Rows for every N in `radii` plus N_max (gap 0);
/// the log-log slope of the exact gap is fitted over rows with N < N_max.
CauchyStudy cauchy_rate_study(double alpha, int m, std::span<const int> radii, int N_max,
                              long samples, std::uint64_t master_seed, int workers);

struct LowerBoundCheck {
  long samples = 0;
  long violations = 0;
  double bound = 0.0;            // c(m) sigma^{m+1}
  double max_negative_gn = 0.0;  // max over samples of -G_N
  bool passed() const noexcept { return violations == 0; }
};

LowerBoundCheck gn_pointwise_lower_bound_check(std::span<const double> gn_values,
                                               const WickContext& ctx);

struct TailRow {
  double lambda = 0.0;
  long hits = 0;
  double probability = 0.0;
  bool censored = false;  // fewer than min_hits: probability is an upper bound
};

struct TailStudy {
  WickContext ctx;
  long samples = 0;
  std::uint64_t master_seed = 0;
  std::vector<TailRow> rows;
  double bound = 0.0;
  double min_observed = 0.0;
  double max_observed = 0.0;
  bool monotone = true;
  LinearFit fit;  // log P against lambda^{1/(m+1)} over uncensored rows, lambda > 0
  bool fit_available = false;
};

TailStudy tail_study(std::span<const double> negative_gn, const WickContext& ctx,
                     std::span<const double> lambda_grid, long min_hits,
                     std::uint64_t master_seed);

struct ChaosRow {
  double p = 0.0;
  double norm_p = 0.0;
  double norm_2 = 0.0;
  double ratio = 0.0;
  double bound = 0.0;           // (p-1)^{k/2}
  double relative_se = 0.0;     // of the ratio
  bool passed = false;          // ratio <= bound (1 + slack * relative_se)
};

/// Empirical hypercontractivity check for an observable in chaos order <= k.
std::vector<ChaosRow> wiener_chaos_check(std::span<const double> values, int k,
                                         std::span<const double> p_list, double slack = 3.0);

}  // namespace fnlw

#endif  // FNLW_GAUSSIAN_MEASURE_HPP
