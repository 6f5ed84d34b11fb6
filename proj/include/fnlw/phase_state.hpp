#ifndef FNLW_PHASE_STATE_HPP
#define FNLW_PHASE_STATE_HPP

#include <stdexcept>

#include "fnlw/fourier_field.hpp"

namespace fnlw {

/// Position/velocity pair (u, v = du/dt) on one grid.
struct PhaseState {
  Field u;
  Field v;

  PhaseState() = default;
  explicit PhaseState(const GridSpec& grid) : u(grid), v(grid) {}
  PhaseState(Field u_, Field v_) : u(std::move(u_)), v(std::move(v_)) {
    if (!(u.grid() == v.grid())) throw std::invalid_argument("u and v must share one grid");
  }

  const GridSpec& grid() const noexcept { return u.grid(); }
};

}  // namespace fnlw

#endif  // FNLW_PHASE_STATE_HPP
