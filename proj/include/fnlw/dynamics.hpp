#ifndef FNLW_DYNAMICS_HPP
#define FNLW_DYNAMICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "fnlw/hermite.hpp"
#include "fnlw/phase_state.hpp"

namespace fnlw {

/// Stored states of a truncated flow together with the Wick Hamiltonian of
/// each stored state.
struct TrajectorySample {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<double> hamiltonian_log;

  std::size_t size() const noexcept { return times.size(); }
};

/// Exact solution of u_tt + (1 - Delta)^alpha u = 0 over time t, applied per
/// mode with frequency <n>^alpha (alpha taken from the grid).
PhaseState linear_propagate(const PhaseState& state, double t);

/// Trapezoid approximation of the Duhamel integral
///   D(F)(t) = int_0^t sin((t - s) <n>^alpha) / <n>^alpha F(s) ds
/// from samples forcing[j] = F(j * dt_quad). t must be a node inside the
/// sampled window.
Field duhamel(std::span<const Field> forcing, double t, double dt_quad);

/// Streaming form of `duhamel`: forcing samples are added one node at a time
/// and never stored.
class DuhamelSum {
 public:
  DuhamelSum(double t, double dt_quad);

  /// Index of the last node, t / dt_quad.
  long last_node() const noexcept { return J_; }

  /// Adds the forcing sample at node j (0 <= j <= last_node()).
  void add(long j, const Field& forcing);

  /// The quadrature value; zero on the first forcing lattice if t = 0.
  Field result() const;

 private:
  double dt_quad_;
  long J_;
  std::optional<Field> acc_;
  Eigen::ArrayXXd omega_;
  int band_ = 0;
};

/// 1/2 ||u||_{H^alpha}^2 + 1/2 ||v||_{L^2}^2.
double quadratic_energy(const PhaseState& state);

/// Truncated Wick Hamiltonian: quadratic energy + G_N / (2m+2).
double wick_hamiltonian(const PhaseState& state, const WickContext& ctx);

/// Strang splitting for u_tt + (1 - Delta)^alpha u + coupling P_N :u^{2m+1}: = 0:
/// half kick, exact linear rotation, half kick. Negative dt runs backwards.
class TruncatedFlow {
 public:
  TruncatedFlow(const WickContext& ctx, int M, double dt, double coupling = 1.0);

  const WickContext& context() const noexcept { return ctx_; }
  double dt() const noexcept { return dt_; }
  double coupling() const noexcept { return coupling_; }

  /// One full Strang step, in place.
  void step(PhaseState& state) const;

  /// `steps` Strang steps with adjacent half kicks merged.
  void advance(PhaseState& state, long steps) const;

  /// v <- v - tau * coupling * P_N(:u^{2m+1}:).
  void kick(PhaseState& state, double tau) const;

  /// Exact linear rotation by the step dt.
  void rotate(PhaseState& state) const;

 private:
  WickContext ctx_;
  double dt_;
  double coupling_;
  int M_;
  Eigen::ArrayXXd cos_, sin_, omega_;
};

PhaseState strang_step(const PhaseState& state, double dt, const WickContext& ctx,
                       double coupling = 1.0);

/// Evolves to time T with step dt, storing every `store_every` steps and at T.
/// T must be a multiple of dt.
TrajectorySample evolve(const PhaseState& state, double T, double dt, const WickContext& ctx,
                        long store_every, double coupling = 1.0);

/// Number of steps T / dt, rejecting T that is not a multiple of dt.
long step_count(double T, double dt);

}  // namespace fnlw

#endif  // FNLW_DYNAMICS_HPP
