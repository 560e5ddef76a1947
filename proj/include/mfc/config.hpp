#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mfc/schedule.hpp"

namespace mfc {

/// Malformed configuration text, unknown keys, or an unusable parameter.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeGrid {
  double dt = 1e-4;  // control sample period [s]
  std::int64_t n_steps = 100000;
  std::int64_t substeps = 1;  // plant integration sub-steps per period

  double horizon() const { return dt * static_cast<double>(n_steps); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

struct Gains {
  double alpha = 1.0;
  double kp = 1.0;
  double ki = 0.0;
  double kd = 0.0;
  int nu = 1;  // derivation order of the ultra-local model

  friend bool operator==(const Gains&, const Gains&) = default;
};

enum class ControllerKind { iP, iPI, iPD, iPID };
enum class EstimatorKind { window, recursive, oracle };

std::string_view to_string(ControllerKind k);
std::string_view to_string(EstimatorKind k);
std::optional<ControllerKind> parse_controller_kind(std::string_view s);
std::optional<EstimatorKind> parse_estimator_kind(std::string_view s);

/// Everything that determines a run. One value fully reproduces a trace.
struct SimConfig {
  TimeGrid grid;
  Gains gains;
  std::string plant_id = "sys1";
  ControllerKind controller_kind = ControllerKind::iP;
  EstimatorKind estimator_kind = EstimatorKind::window;
  double tau = 1e-2;  // estimator window length [s]
  Schedule setpoint = Schedule::constant(0.0);
  Schedule fault = Schedule::constant(1.0);  // multiplicative actuator factor
  double noise_std = 0.0;
  int quant_bits = 0;  // 0 (off) or 12
  double v_limit = 1.65;
  std::uint64_t seed = 1;
  double prefilter_tc = 0.0;  // 0 disables the setpoint prefilter

  // Low-pass time constant of the recursive estimator [s].
  double estimator_tc = 5e-3;
  // Low-pass time constant of the derivative term; unset means 10 * dt.
  std::optional<double> deriv_tc;

  std::vector<double> plant_x0;  // empty means the origin
  Schedule plant_f = Schedule::constant(2.0);  // F(t) of the ultralocal plant
  double plant_alpha = 1.0;                    // input gain of the ultralocal plant

  double metrics_band = 0.05;  // recovery band, fraction of setpoint amplitude
  double metrics_dwell = 0.1;  // [s]

  double effective_deriv_tc() const { return deriv_tc ? *deriv_tc : 10.0 * grid.dt; }
  /// Number of sample intervals spanned by the estimator window.
  std::int64_t window_intervals() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Every violated invariant as a readable message; empty means valid.
std::vector<std::string> validate_config(const SimConfig& c);

/// Assigns one dotted key from its text value. Throws ConfigError.
void set_config_value(SimConfig& c, std::string_view key, std::string_view value);
/// Reads one key back in the same text form the parser accepts.
std::string get_config_value(const SimConfig& c, std::string_view key);
/// Keys accepted by set_config_value, in serialization order.
const std::vector<std::string>& config_keys();
bool is_numeric_key(std::string_view key);

/// Parses `key = value` lines; `#` starts a comment. Unlisted keys keep the
/// defaults of `base`.
SimConfig parse_config(std::string_view text, SimConfig base = {});
SimConfig load_config_file(const std::string& path);
/// Round-trips exactly through parse_config.
std::string serialize_config(const SimConfig& c);

/// Applies `key=value` overrides in order.
void apply_overrides(SimConfig& c, const std::vector<std::string>& overrides);

// Built-in scenarios.
std::vector<std::string> scenario_ids();
std::optional<SimConfig> find_scenario(std::string_view id);

}  // namespace mfc
