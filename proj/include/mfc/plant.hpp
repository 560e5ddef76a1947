#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mfc/schedule.hpp"

namespace mfc {

/// Plant state; plants of order 1 leave the second entry at zero.
using StateVec = std::array<double, 2>;

inline constexpr double kDivergenceBound = 1e9;

/// Numerical blow-up of the plant state.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double t, const StateVec& x);
  double time() const { return t_; }
  const StateVec& state() const { return x_; }

 private:
  double t_;
  StateVec x_;
};

/// One classical RK4 step of x' = f(t, x, v_bar) with the input held over the
/// step. Throws DivergenceError when the result is non-finite or exceeds the
/// divergence bound.
template <class Dynamics>
StateVec rk4_step(Dynamics&& f, double t, const StateVec& x, double v_bar, double h) {
  auto axpy = [](const StateVec& a, double s, const StateVec& b) {
    return StateVec{a[0] + s * b[0], a[1] + s * b[1]};
  };
  const StateVec k1 = f(t, x, v_bar);
  const StateVec k2 = f(t + 0.5 * h, axpy(x, 0.5 * h, k1), v_bar);
  const StateVec k3 = f(t + 0.5 * h, axpy(x, 0.5 * h, k2), v_bar);
  const StateVec k4 = f(t + h, axpy(x, h, k3), v_bar);
  StateVec out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(out[i]) || std::abs(out[i]) > kDivergenceBound)
      throw DivergenceError(t + h, out);
  }
  return out;
}

// Benchmark plants. Each printed equation contains the input derivative; the
// realizations fold it into the second state so that a held input suffices.

/// 2(3 v' v^2 + v^3) = 0.5 y'' + 0.5 y' - y, with y = x1 and
/// x2 = 0.5 y' - 2 v^3.
StateVec system1_dynamics(const StateVec& x, double v);
/// 9 v' v^2 + v^3 = y'' + y' + y, with y = x1 and x2 = y' - 3 v^3.
StateVec system2_dynamics(const StateVec& x, double v);
/// y' = F(t) + alpha v.
StateVec ultralocal_plant(double t, const StateVec& x, double v, const Schedule& f_schedule,
                          double alpha);

enum class PlantKind { sys1, sys2, ultralocal };

struct PlantInfo {
  std::string_view id;
  PlantKind kind;
  std::size_t dim;
  std::string_view description;
};

/// Registered plants sorted by id.
const std::vector<PlantInfo>& plant_registry();
const PlantInfo* find_plant(std::string_view id);

class Plant {
 public:
  /// `x0` may be empty (origin) or hold exactly `dim` entries.
  Plant(const PlantInfo& info, const std::vector<double>& x0, Schedule f_schedule = {},
        double alpha = 1.0);

  StateVec derivative(double t, const StateVec& x, double v_bar) const;

  double output() const { return x_[0]; }
  /// y' at the current state under a held input.
  double output_rate(double t, double v_bar) const;
  /// y'' at the current state under a held input (input derivative excluded).
  double output_accel(double t, double v_bar) const;

  /// Integrates one control period with `substeps` RK4 steps.
  void advance(double t, double v_bar, double dt, std::int64_t substeps);

  const StateVec& state() const { return x_; }
  const PlantInfo& info() const { return *info_; }

 private:
  const PlantInfo* info_;
  StateVec x_{};
  Schedule f_;
  double alpha_;
};

}  // namespace mfc
