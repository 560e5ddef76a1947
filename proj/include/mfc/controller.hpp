#pragma once

// Intelligent controllers and the discrete calculus they rely on.
//
// With the ultra-local model y^(nu) = F + alpha u, each law cancels the
// estimated F and leaves linear error dynamics set by the gains:
//
//   iP    u = -(F - y*'  + kp e) / alpha
//   iPI   u = -(F - y*'  + kp e + ki int e) / alpha
//   iPID  u = -(F - y*'' + kp e + ki int e + kd e') / alpha      (iPD: ki = 0)
//
// with e = y - y*.

#include "mfc/config.hpp"
#include "mfc/ops.hpp"

namespace mfc {

template <class T>
T ip_step(const T& f_est, const T& yref_dot, const T& e, const Gains& g) {
  return -(f_est - yref_dot + g.kp * e) / g.alpha;
}

template <class T>
T ipi_step(const T& f_est, const T& yref_dot, const T& e, const T& integral_e, const Gains& g) {
  return -(f_est - yref_dot + g.kp * e + g.ki * integral_e) / g.alpha;
}

template <class T>
T ipid_step(const T& f_est, const T& yref_ddot, const T& e, const T& integral_e, const T& e_dot,
            const Gains& g) {
  return -(f_est - yref_ddot + g.kp * e + g.ki * integral_e + g.kd * e_dot) / g.alpha;
}

template <class T>
T trapezoid_update(const T& integral, const T& x_k, const T& x_km1, double dt) {
  return integral + dt * (x_k + x_km1) / 2.0;
}

template <class T>
T backward_diff(const T& x_k, const T& x_km1, double dt) {
  return (x_k - x_km1) / dt;
}

/// First-order low-pass, a = dt/(dt + tc); tc = 0 passes the input through.
template <class T>
T lowpass_step(const T& state, const T& x_k, double dt, double tc) {
  const double a = dt / (dt + tc);
  return state + a * (x_k - state);
}

/// Backward difference of setpoint samples. Order 1 uses (yref_k, yref_km1);
/// order 2 additionally needs yref_km2.
template <class T>
T reference_derivative(const T& yref_k, const T& yref_km1, const T& yref_km2, double dt,
                       int order) {
  if (order == 1) return (yref_k - yref_km1) / dt;
  return (yref_k - 2.0 * yref_km1 + yref_km2) / (dt * dt);
}

/// Mutable state of one control loop.
template <class T>
struct ControllerState {
  T integral_e{};
  T prev_e{};
  T prev_yref{};
  T d_filtered{};
  bool primed = false;  // false until the first sample has been seen
  OpCounts op_counter;  // tallies of the current step when instrumented
};

}  // namespace mfc
