#ifndef FNLW_PICARD_HPP
#define FNLW_PICARD_HPP

#include <vector>

#include "fnlw/hermite.hpp"
#include "fnlw/phase_state.hpp"
#include "fnlw/random.hpp"

namespace fnlw {

/// Enhanced data on the quadrature nodes t_j = j dt_quad, j = 0..J, for one
/// sample: z_N(t_j), the Wick powers :z^l:(t_j) (l = 0..2m+1) as values on the
/// base grid, and, for the second order expansion, z_2(t_j) projected to the
/// band. Grid values of :z^l: are exact samples of the full-band power, and
/// every product used below has total band (2m+1) N, so P_N of it is exact on
/// a lattice with M >= (2m+2) N + 1.
struct EnhancedData {
  GridSpec grid;
  WickContext ctx;
  double dt_quad = 0.0;
  std::vector<double> times;
  std::vector<Field> z;
  std::vector<std::vector<GridValues<double>>> wick;  // wick[l][j]
  std::vector<Field> z2;                              // P_N z_2(t_j), second order only

  static EnhancedData build(const PhaseState& data, const WickContext& ctx, double T,
                            double dt_quad, bool second_order);
  std::size_t nodes() const noexcept { return times.size(); }
};

/// Default Picard metric exponent s = (s0 + s1) / 2 with s0 = 2 m alpha / (2m+1)
/// and s1 = alpha (2m+2) - (2m+1).
double picard_metric_s(double alpha, int m);

struct PicardOptions {
  int max_iters = 60;
  double tol = 1e-11;
  double s = -1.0;  // negative: picard_metric_s
};

struct PicardResult {
  std::vector<Field> w;             // fixed point at the nodes
  std::vector<double> increments;   // sup_j ||w_{i+1}(t_j) - w_i(t_j)||_{H^s}
  double contraction_ratio = 0.0;   // max ratio of consecutive increments
  double s = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // see picard_residual
};

/// w = -D(P_N sum_l C(2m+1, l) :z^l: w^{2m+1-l}) from w = 0.
PicardResult picard_solve_w(const EnhancedData& data, const PicardOptions& options);
PicardResult picard_solve_w(const SeedSpec& seed, double T, double dt_quad, const WickContext& ctx,
                            const PicardOptions& options);

/// w2 = -D(P_N sum_{(l, j) != (2m+1, 0)} b c :z^l: z2^{2m+1-l-j} w2^j) from w2 = 0.
PicardResult picard_solve_w2(const EnhancedData& data, const PicardOptions& options);
PicardResult picard_solve_w2(const SeedSpec& seed, double T, double dt_quad,
                             const WickContext& ctx, const PicardOptions& options);

/// max over interior nodes of the L2 norm of
///   second difference of w + (1 - Delta)^alpha w + nonlinearity.
/// `second_order` selects the w2 equation.
double picard_residual(const EnhancedData& data, const std::vector<Field>& w, bool second_order);

struct ConsistencyRow {
  double dt = 0.0;
  double dt_quad = 0.0;
  double gap = 0.0;  // ||u_N(T) - z(T) - w(T)||_{L2}
  bool converged = false;
};

struct ConsistencyReport {
  double T = 0.0;
  std::vector<ConsistencyRow> rows;  // (dt, dt_quad) halved from row to row
  std::vector<double> ratios;        // gap[i] / gap[i+1]
};

/// Direct Strang evolution of the truncated flow versus z + w (Picard), on
/// the same sample, for `levels` successive halvings of (dt, dt_quad).
ConsistencyReport full_truncated_consistency(const SeedSpec& seed, double T, double dt,
                                             double dt_quad, const WickContext& ctx,
                                             const PicardOptions& options, int levels = 2);

}  // namespace fnlw

#endif  // FNLW_PICARD_HPP
