#include "mfc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mfc/actuation.hpp"
#include "mfc/controller.hpp"
#include "mfc/estimator.hpp"

namespace mfc {

namespace {

void accumulate(OpReport& r, const OpCounts& c) {
  r.max.add_sub = std::max(r.max.add_sub, c.add_sub);
  r.max.mul_div = std::max(r.max.mul_div, c.mul_div);
  r.max.conditionals = std::max(r.max.conditionals, c.conditionals);
  r.max.assignments = std::max(r.max.assignments, c.assignments);
  r.mean_add_sub += static_cast<double>(c.add_sub);
  r.mean_mul_div += static_cast<double>(c.mul_div);
  r.mean_conditionals += static_cast<double>(c.conditionals);
  r.mean_assignments += static_cast<double>(c.assignments);
  r.last = c;
  ++r.steps;
}

void finish(OpReport& r) {
  if (r.steps == 0) return;
  const auto n = static_cast<double>(r.steps);
  r.mean_add_sub /= n;
  r.mean_mul_div /= n;
  r.mean_conditionals /= n;
  r.mean_assignments /= n;
}

template <class Real>
RunResult run_loop(const SimConfig& c, bool instrument) {
  RunResult result;
  result.config_echo = c;
  result.seed_used = c.seed;
  result.trace.reserve(static_cast<std::size_t>(c.grid.n_steps));

  const PlantInfo* info = find_plant(c.plant_id);
  Plant plant(*info, c.plant_x0, c.plant_f, c.plant_alpha);
  std::mt19937_64 rng(c.seed);

  const double dt = c.grid.dt;
  const Gains& g = c.gains;
  const bool second_order = g.nu == 2;
  const bool use_prefilter = c.prefilter_tc > 0.0;
  const bool linear_ref = c.setpoint.interpolation == Interpolation::linear;
  const double deriv_tc = c.effective_deriv_tc();

  std::optional<SignalWindow<Real>> window;
  std::optional<WindowKernel> kernel;
  if (c.estimator_kind == EstimatorKind::window) {
    window.emplace(c.window_intervals() + 1);
    if (!second_order) kernel.emplace(c.window_intervals(), dt, g.alpha);
  }

  ControllerState<Real> cs;
  FEstimate<Real> f_est;
  Real y_prev(0.0);
  Real v_prev(0.0);  // saturated control held over the previous period
  double v_bar_prev = 0.0;
  // Setpoint history for derivatives: raw samples and the prefilter state.
  Real ref_km1(0.0);
  Real ref_km2(0.0);
  Real ref_filtered(0.0);
  const Real zero(0.0);

  OpReport ops;
  double f_err_sq = 0.0;
  std::int64_t f_err_n = 0;

  for (std::int64_t k = 0; k < c.grid.n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double y_true = plant.output();
    const double y_meas = measure(y_true, c.noise_std, c.quant_bits, rng);
    const double ref_raw = schedule_eval(c.setpoint, t);
    const double pi = schedule_eval(c.fault, t);
    const double f_true = second_order
                              ? plant.output_accel(t, v_bar_prev) - g.alpha * to_double(v_prev)
                              : plant.output_rate(t, v_bar_prev) - g.alpha * to_double(v_prev);

    OpCounts step_ops;
    std::optional<OpScope> scope;
    if (instrument) scope.emplace(step_ops);

    const Real y(y_meas);
    const Real ref_in(ref_raw);

    // Raw setpoint derivative: zero for held steps, backward differences for
    // linear segments.
    Real raw_dot(0.0);
    Real raw_ddot(0.0);
    if (linear_ref) {
      if (k >= 1) raw_dot = reference_derivative(ref_in, ref_km1, ref_km2, dt, 1);
      if (k >= 2 && second_order) raw_ddot = reference_derivative(ref_in, ref_km1, ref_km2, dt, 2);
      ref_km2 = ref_km1;
      ref_km1 = ref_in;
    }

    // Prefilter: exact derivatives of the first-order filter state.
    Real filt_dot(0.0);
    Real filt_ddot(0.0);
    if (use_prefilter) {
      if (k == 0) {
        ref_filtered = ref_in;
      } else {
        ref_filtered = lowpass_step(ref_filtered, ref_in, dt, c.prefilter_tc);
      }
      filt_dot = (ref_in - ref_filtered) / c.prefilter_tc;
      filt_ddot = (raw_dot - filt_dot) / c.prefilter_tc;
    }
    const Real& yref = use_prefilter ? ref_filtered : ref_in;
    const Real& yref_dot = use_prefilter ? filt_dot : raw_dot;
    const Real& yref_ddot = use_prefilter ? filt_ddot : raw_ddot;

    const Real e = y - yref;

    switch (c.estimator_kind) {
      case EstimatorKind::oracle:
        f_est = {Real(f_true), true};
        break;
      case EstimatorKind::window:
        window->push(y, v_prev);
        f_est = second_order ? estimate_f_nu2_window(*window, g.alpha, dt) : kernel->estimate(*window);
        break;
      case EstimatorKind::recursive:
        if (k >= 1) f_est = estimate_f_recursive(f_est, y, y_prev, v_prev, g.alpha, dt, c.estimator_tc);
        y_prev = y;
        break;
    }
    const Real& f_used = f_est.valid ? f_est.value : zero;

    Real u(0.0);
    switch (c.controller_kind) {
      case ControllerKind::iP:
        u = ip_step(f_used, yref_dot, e, g);
        break;
      case ControllerKind::iPI:
        if (cs.primed) cs.integral_e = trapezoid_update(cs.integral_e, e, cs.prev_e, dt);
        u = ipi_step(f_used, yref_dot, e, cs.integral_e, g);
        break;
      case ControllerKind::iPD:
      case ControllerKind::iPID:
        if (cs.primed) {
          if (g.ki != 0.0) cs.integral_e = trapezoid_update(cs.integral_e, e, cs.prev_e, dt);
          cs.d_filtered = lowpass_step(cs.d_filtered, backward_diff(e, cs.prev_e, dt), dt, deriv_tc);
        }
        u = ipid_step(f_used, yref_ddot, e, cs.integral_e, cs.d_filtered, g);
        break;
    }
    if (c.controller_kind != ControllerKind::iP) {
      cs.prev_e = e;
      cs.prev_yref = yref;
    }
    cs.primed = true;

    const Actuation<Real> act = apply_actuation(u, pi, c.v_limit);
    v_prev = act.v;

    scope.reset();
    if (instrument) {
      cs.op_counter = step_ops;
      accumulate(ops, step_ops);
    }

    if (f_est.valid) {
      const double d = to_double(f_used) - f_true;
      f_err_sq += d * d;
      ++f_err_n;
    }

    result.trace.push_back({t, to_double(yref), y_true, y_meas, to_double(e), to_double(f_used),
                            to_double(u), to_double(act.v), pi});

    v_bar_prev = to_double(act.v_bar);
    try {
      plant.advance(t, v_bar_prev, dt, c.grid.substeps);
    } catch (const DivergenceError& err) {
      result.divergence = Divergence{err.time(), err.state(), err.what()};
      break;
    }
  }

  if (!result.trace.empty())
    result.metrics = compute_metrics(result.trace, {c.v_limit, c.metrics_band, c.metrics_dwell});
  result.metrics.f_error_rms = f_err_n > 0 ? std::sqrt(f_err_sq / static_cast<double>(f_err_n)) : 0.0;
  if (instrument) {
    finish(ops);
    result.ops = ops;
  }
  return result;
}

}  // namespace

RunResult run_scenario(const SimConfig& c, const RunOptions& opts) {
  auto violations = validate_config(c);
  if (!violations.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }
  return opts.instrument_ops ? run_loop<Counted>(c, true) : run_loop<double>(c, false);
}

OpReport count_ops(const SimConfig& c) { return *run_scenario(c, {.instrument_ops = true}).ops; }

Metrics compute_metrics(std::span<const TraceRow> trace, const MetricsOptions& opts) {
  Metrics m;
  if (trace.empty()) return m;
  const std::size_t n = trace.size();

  double sq = 0.0;
  double ref_peak = 0.0;
  std::size_t saturated = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ae = std::abs(trace[k].e);
    sq += trace[k].e * trace[k].e;
    m.max_abs_error = std::max(m.max_abs_error, ae);
    if (k > 0) m.iae += 0.5 * (trace[k].t - trace[k - 1].t) * (ae + std::abs(trace[k - 1].e));
    if (std::abs(trace[k].u) > opts.v_limit) ++saturated;
    ref_peak = std::max(ref_peak, std::abs(trace[k].y_ref));
  }
  m.rms_error = std::sqrt(sq / static_cast<double>(n));
  m.saturation_fraction = static_cast<double>(saturated) / static_cast<double>(n);
  m.final_error = std::abs(trace.back().e);

  // Band around the current setpoint; a zero setpoint falls back to the peak.
  auto band_at = [&](std::size_t k) {
    const double amp = std::abs(trace[k].y_ref) > 0.0 ? std::abs(trace[k].y_ref)
                                                       : (ref_peak > 0.0 ? ref_peak : 1.0);
    return opts.band * amp;
  };
  // run_end[k]: last index of the in-band run starting at k, or npos.
  constexpr auto npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> run_end(n, npos);
  for (std::size_t k = n; k-- > 0;) {
    if (std::abs(trace[k].e) <= band_at(k))
      run_end[k] = (k + 1 < n && run_end[k + 1] != npos) ? run_end[k + 1] : k;
  }

  for (std::size_t k = 1; k < n; ++k) {
    if (trace[k].pi == trace[k - 1].pi) continue;
    FaultRecovery rec{trace[k].t, std::nullopt};
    for (std::size_t j = k; j < n; ++j) {
      if (run_end[j] == npos) continue;
      if (trace[run_end[j]].t - trace[j].t >= opts.dwell - 1e-12) {
        rec.recovery_time = trace[j].t - trace[k].t;
        break;
      }
      j = run_end[j];  // the whole run is too short; skip past it
    }
    m.recoveries.push_back(rec);
  }
  return m;
}

}  // namespace mfc
