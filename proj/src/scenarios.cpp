#include <algorithm>
#include <functional>
#include <map>

#include "mfc/config.hpp"

namespace mfc {

namespace {

// Setpoint amplitude and timing are our own choice: +-0.25 with 8 s segments.
// With kp = 1 the error decays as exp(-t), so a segment has to last several
// seconds for the output to settle before the next step. At |y*| = 0.25 the
// sys1 input gain 12 v^2 stays below the window estimator's stability bound
// (about 4.3 alpha); +-0.5 already exceeds it.
constexpr double kSegment = 8.0;
constexpr double kAmplitude = 0.25;

Schedule square_setpoint() {
  return {{{0.0, kAmplitude}, {kSegment, -kAmplitude}, {2 * kSegment, kAmplitude}},
          Interpolation::hold};
}

// Power loss late in the second segment, once the loop has settled.
Schedule power_loss() { return {{{0.0, 1.0}, {1.75 * kSegment, 0.5}}, Interpolation::hold}; }

SimConfig benchmark(const char* plant) {
  SimConfig c;
  c.plant_id = plant;
  c.setpoint = square_setpoint();
  c.grid.n_steps = 240000;  // 24 s
  return c;
}

const std::map<std::string, std::function<SimConfig()>, std::less<>>& registry() {
  static const std::map<std::string, std::function<SimConfig()>, std::less<>> reg = {
      {"ultralocal-cancel",
       [] {
         SimConfig c;
         c.plant_id = "ultralocal";
         c.plant_f = Schedule::constant(2.0);
         c.estimator_kind = EstimatorKind::oracle;
         c.setpoint = Schedule::constant(0.0);
         c.plant_x0 = {1.0};
         c.v_limit = 10.0;  // keeps the loop unsaturated
         c.grid.n_steps = 50000;
         return c;
       }},
      {"sys1-nominal", [] { return benchmark("sys1"); }},
      {"sys1-fault",
       [] {
         auto c = benchmark("sys1");
         c.fault = power_loss();
         return c;
       }},
      {"sys2-nominal", [] { return benchmark("sys2"); }},
      {"sys2-fault",
       [] {
         auto c = benchmark("sys2");
         c.fault = power_loss();
         return c;
       }},
      {"estimator-bench",
       [] {
         SimConfig c;
         c.plant_id = "ultralocal";
         c.plant_f = {{{0.0, 2.0}, {3.0, -1.0}, {6.0, 0.5}}, Interpolation::hold};
         c.setpoint = {{{0.0, 0.5}, {5.0, -0.5}}, Interpolation::hold};
         c.v_limit = 10.0;
         return c;
       }},
  };
  return reg;
}

}  // namespace

std::vector<std::string> scenario_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, make] : registry()) ids.push_back(id);
  return ids;  // std::map keeps them sorted
}

std::optional<SimConfig> find_scenario(std::string_view id) {
  const auto& reg = registry();
  auto it = reg.find(id);
  if (it == reg.end()) return std::nullopt;
  return it->second();
}

}  // namespace mfc
