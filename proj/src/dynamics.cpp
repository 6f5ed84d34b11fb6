#include "fnlw/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fnlw/gaussian_measure.hpp"

namespace fnlw {

namespace {

/// <n>^alpha on every slot of an M x M lattice.
Eigen::ArrayXXd frequencies(int M, double alpha) {
  Eigen::ArrayXXd omega(M, M);
  for_each_mode(M, [&](Mode n, int i, int j) {
    omega(i, j) = std::pow(1.0 + n.norm_squared(), 0.5 * alpha);
  });
  return omega;
}

}  // namespace

long step_count(double T, double dt) {
  if (T < 0.0) throw std::invalid_argument("final time must be >= 0");
  if (T == 0.0) return 0;
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be > 0");
  const double ratio = T / dt;
  const long steps = std::lround(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("T=" + std::to_string(T) + " is not a multiple of dt=" +
                                std::to_string(dt));
  return steps;
}

PhaseState linear_propagate(const PhaseState& state, double t) {
  const int M = state.u.size();
  const Eigen::ArrayXXd omega = frequencies(M, state.grid().alpha);
  const Eigen::ArrayXXd c = (t * omega).cos(), s = (t * omega).sin();
  PhaseState out = state;
  out.u.coefficients() = c * state.u.coefficients() + (s / omega) * state.v.coefficients();
  out.v.coefficients() = -(omega * s) * state.u.coefficients() + c * state.v.coefficients();
  return out;
}

DuhamelSum::DuhamelSum(double t, double dt_quad) : dt_quad_(dt_quad) {
  if (!(dt_quad > 0.0)) throw std::invalid_argument("quadrature step must be > 0");
  if (t < 0.0) throw std::invalid_argument("Duhamel time must be >= 0");
  const double ratio = t / dt_quad;
  J_ = std::lround(ratio);
  if (std::abs(ratio - J_) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("t=" + std::to_string(t) + " is not a quadrature node");
}

void DuhamelSum::add(long j, const Field& forcing) {
  if (j < 0 || j > J_) throw std::invalid_argument("node outside the Duhamel window");
  if (!acc_) {
    acc_.emplace(forcing.grid());
    omega_ = frequencies(forcing.size(), forcing.grid().alpha);
  } else if (forcing.size() != acc_->size()) {
    throw std::invalid_argument("forcing lattices differ");
  }
  band_ = std::max(band_, forcing.band());
  const long lag = J_ - j;
  if (lag == 0) return;  // sin(0) = 0
  const double weight = (j == 0 || j == J_) ? 0.5 * dt_quad_ : dt_quad_;
  acc_->coefficients() += (weight * (lag * dt_quad_ * omega_).sin() / omega_) *
                          forcing.coefficients();
}

Field DuhamelSum::result() const {
  if (!acc_) throw std::logic_error("Duhamel sum has no forcing samples");
  Field out = *acc_;
  out.set_band(band_);
  return out;
}

Field duhamel(std::span<const Field> forcing, double t, double dt_quad) {
  if (forcing.empty()) throw std::invalid_argument("Duhamel needs forcing samples");
  DuhamelSum sum(t, dt_quad);
  if (sum.last_node() >= static_cast<long>(forcing.size()))
    throw std::invalid_argument("t=" + std::to_string(t) + " is outside the sampled window");
  for (long j = 0; j <= sum.last_node(); ++j) sum.add(j, forcing[j]);
  return sum.result();
}

double quadratic_energy(const PhaseState& state) {
  const double alpha = state.grid().alpha;
  return 0.5 * std::pow(sobolev_norm(state.u, alpha), 2) +
         0.5 * std::pow(sobolev_norm(state.v, 0.0), 2);
}

double wick_hamiltonian(const PhaseState& state, const WickContext& ctx) {
  return quadratic_energy(state) + g_N(state, ctx) / ctx.wick_degree();
}

TruncatedFlow::TruncatedFlow(const WickContext& ctx, int M, double dt, double coupling)
    : ctx_(ctx),
      dt_(dt),
      coupling_(coupling),
      M_(M),
      omega_(frequencies(M, ctx.alpha)) {
  cos_ = (dt_ * omega_).cos();
  sin_ = (dt_ * omega_).sin();
}

void TruncatedFlow::rotate(PhaseState& state) const {
  if (state.u.size() != M_) throw std::invalid_argument("state lattice does not match the flow");
  auto& u = state.u.coefficients();
  auto& v = state.v.coefficients();
  const Eigen::ArrayXXcd u0 = u;
  u = cos_ * u0 + (sin_ / omega_) * v;
  v = -(omega_ * sin_) * u0 + cos_ * v;
}

void TruncatedFlow::kick(PhaseState& state, double tau) const {
  if (coupling_ == 0.0) return;
  const Field force = wick_power_projected(state.u, 2 * ctx_.m + 1, ctx_);
  state.v.coefficients() -= (tau * coupling_) * force.coefficients();
}

void TruncatedFlow::step(PhaseState& state) const {
  kick(state, 0.5 * dt_);
  rotate(state);
  kick(state, 0.5 * dt_);
}

void TruncatedFlow::advance(PhaseState& state, long steps) const {
  if (steps <= 0) return;
  kick(state, 0.5 * dt_);
  for (long s = 0; s < steps; ++s) {
    rotate(state);
    kick(state, s + 1 == steps ? 0.5 * dt_ : dt_);
  }
}

PhaseState strang_step(const PhaseState& state, double dt, const WickContext& ctx,
                       double coupling) {
  PhaseState out = state;
  TruncatedFlow(ctx, state.u.size(), dt, coupling).step(out);
  return out;
}

TrajectorySample evolve(const PhaseState& state, double T, double dt, const WickContext& ctx,
                        long store_every, double coupling) {
  if (store_every < 1) throw std::invalid_argument("store_every must be >= 1");
  const long steps = step_count(T, dt);
  TrajectorySample traj;
  PhaseState current = state;
  auto store = [&](long step) {
    traj.times.push_back(step * dt);
    traj.states.push_back(current);
    traj.hamiltonian_log.push_back(wick_hamiltonian(current, ctx));
  };
  store(0);
  if (steps == 0) return traj;
  const TruncatedFlow flow(ctx, state.u.size(), dt, coupling);
  long done = 0;
  while (done < steps) {
    const long chunk = std::min(store_every, steps - done);
    flow.advance(current, chunk);
    done += chunk;
    store(done);
  }
  return traj;
}

}  // namespace fnlw
