#include "mfc/plant.hpp"

#include <algorithm>
#include <string>

#include "mfc/config.hpp"
#include "text.hpp"

namespace mfc {

namespace {
std::string divergence_message(double t, const StateVec& x) {
  return "plant diverged at t = " + text::exact(t) + " s, x = (" + text::exact(x[0]) + ", " +
         text::exact(x[1]) + ")";
}
}  // namespace

DivergenceError::DivergenceError(double t, const StateVec& x)
    : std::runtime_error(divergence_message(t, x)), t_(t), x_(x) {}

StateVec system1_dynamics(const StateVec& x, double v) {
  const double v3 = v * v * v;
  return {2.0 * x[1] + 4.0 * v3, x[0] - x[1]};
}

StateVec system2_dynamics(const StateVec& x, double v) {
  const double v3 = v * v * v;
  return {x[1] + 3.0 * v3, -x[0] - x[1] - 2.0 * v3};
}

StateVec ultralocal_plant(double t, const StateVec& /*x*/, double v, const Schedule& f_schedule,
                          double alpha) {
  return {schedule_eval(f_schedule, t) + alpha * v, 0.0};
}

const std::vector<PlantInfo>& plant_registry() {
  static const std::vector<PlantInfo> plants = {
      {"sys1", PlantKind::sys1, 2, "2(3v'v^2 + v^3) = 0.5y'' + 0.5y' - y"},
      {"sys2", PlantKind::sys2, 2, "9v'v^2 + v^3 = y'' + y' + y"},
      {"ultralocal", PlantKind::ultralocal, 1, "y' = F(t) + alpha v"},
  };
  return plants;
}

const PlantInfo* find_plant(std::string_view id) {
  const auto& reg = plant_registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const PlantInfo& p) { return p.id == id; });
  return it == reg.end() ? nullptr : &*it;
}

Plant::Plant(const PlantInfo& info, const std::vector<double>& x0, Schedule f_schedule,
             double alpha)
    : info_(&info), f_(std::move(f_schedule)), alpha_(alpha) {
  if (!x0.empty() && x0.size() != info.dim)
    throw ConfigError("plant " + std::string(info.id) + " expects " + std::to_string(info.dim) +
                      " initial state entries");
  for (std::size_t i = 0; i < x0.size(); ++i) x_[i] = x0[i];
}

StateVec Plant::derivative(double t, const StateVec& x, double v_bar) const {
  switch (info_->kind) {
    case PlantKind::sys1:
      return system1_dynamics(x, v_bar);
    case PlantKind::sys2:
      return system2_dynamics(x, v_bar);
    case PlantKind::ultralocal:
      return ultralocal_plant(t, x, v_bar, f_, alpha_);
  }
  return {};
}

double Plant::output_rate(double t, double v_bar) const { return derivative(t, x_, v_bar)[0]; }

double Plant::output_accel(double t, double v_bar) const {
  switch (info_->kind) {
    case PlantKind::sys1:
      return 2.0 * (x_[0] - x_[1]);
    case PlantKind::sys2:
      return -x_[0] - x_[1] - 2.0 * v_bar * v_bar * v_bar;
    case PlantKind::ultralocal: {
      if (f_.interpolation == Interpolation::hold) return 0.0;
      // Slope of the active linear segment.
      const auto& bp = f_.breakpoints;
      for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        if (t >= bp[i].time && t < bp[i + 1].time)
          return (bp[i + 1].value - bp[i].value) / (bp[i + 1].time - bp[i].time);
      return 0.0;
    }
  }
  return 0.0;
}

void Plant::advance(double t, double v_bar, double dt, std::int64_t substeps) {
  const double h = dt / static_cast<double>(substeps);
  auto f = [this](double tt, const StateVec& x, double vb) { return derivative(tt, x, vb); };
  for (std::int64_t i = 0; i < substeps; ++i)
    x_ = rk4_step(f, t + static_cast<double>(i) * h, x_, v_bar, h);
}

}  // namespace mfc
