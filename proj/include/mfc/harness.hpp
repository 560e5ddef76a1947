#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfc/config.hpp"
#include "mfc/ops.hpp"
#include "mfc/plant.hpp"

namespace mfc {

/// One control period. e = y_meas - y_ref; |v| <= v_limit.
struct TraceRow {
  double t = 0.0;
  double y_ref = 0.0;
  double y_true = 0.0;
  double y_meas = 0.0;
  double e = 0.0;
  double f_est = 0.0;
  double u = 0.0;
  double v = 0.0;
  double pi = 1.0;
};

struct FaultRecovery {
  double fault_time = 0.0;
  std::optional<double> recovery_time;  // seconds after fault_time
};

struct Metrics {
  double rms_error = 0.0;
  double iae = 0.0;
  double max_abs_error = 0.0;
  double saturation_fraction = 0.0;
  double final_error = 0.0;
  // RMS of f_est minus the true ultra-local term over steps with a valid estimate.
  double f_error_rms = 0.0;
  std::vector<FaultRecovery> recoveries;
};

struct MetricsOptions {
  double v_limit = 1.65;
  double band = 0.05;  // fraction of the current setpoint amplitude
  double dwell = 0.1;  // [s]
};

/// Per-step operation tallies of the estimator + control law + actuation path.
struct OpReport {
  OpCounts max;
  OpCounts last;
  double mean_add_sub = 0.0;
  double mean_mul_div = 0.0;
  double mean_conditionals = 0.0;
  double mean_assignments = 0.0;
  std::int64_t steps = 0;
};

struct Divergence {
  double time = 0.0;
  StateVec state{};
  std::string message;
};

struct RunResult {
  std::vector<TraceRow> trace;
  Metrics metrics;
  SimConfig config_echo;
  std::uint64_t seed_used = 0;
  std::optional<Divergence> divergence;  // set when the plant blew up; trace is partial
  std::optional<OpReport> ops;
};

struct RunOptions {
  bool instrument_ops = false;
};

/// Runs the closed loop. Each period: measure, form the error, estimate F,
/// evaluate the law, saturate and fault the control, integrate the plant.
/// Throws ConfigError when `c` does not validate.
RunResult run_scenario(const SimConfig& c, const RunOptions& opts = {});

Metrics compute_metrics(std::span<const TraceRow> trace, const MetricsOptions& opts = {});

OpReport count_ops(const SimConfig& c);

}  // namespace mfc
