// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mfc/actuation.hpp"
#include "mfc/estimator.hpp"
#include "mfc/harness.hpp"
#include "mfc/output.hpp"
#include "mfc/plant.hpp"
#include "support/oracles.hpp"

using namespace mfc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Window estimator on y' = F0 + sin t.
Outcome estimator_exactness() {
  auto max_err = [](double f0, double dt) {
    auto y = [f0](double t) { return f0 * t + 1.0 - std::cos(t); };
    const double tau = 0.01;
    const auto n = static_cast<std::int64_t>(std::llround(tau / dt));
    WindowKernel kernel(n, dt, 1.0);
    SignalWindow<double> w(n + 1);
    double worst = 0.0;
    const auto steps = static_cast<std::int64_t>(std::llround(2.0 / dt));
    for (std::int64_t k = 0; k <= steps; ++k) {
      const double t = static_cast<double>(k) * dt;
      w.push(y(t), std::sin(t));
      if (!w.filled()) continue;
      worst = std::max(worst, std::abs(kernel.estimate(w).value - f0));
    }
    return worst;
  };
  bool ok = true;
  std::string detail;
  for (double f0 : {-1.0, 2.0}) {
    const double e1 = max_err(f0, 1e-4), e2 = max_err(f0, 5e-5), e3 = max_err(f0, 2.5e-5);
    const double p1 = oracle::observed_order(e1, e2), p2 = oracle::observed_order(e2, e3);
    ok = ok && e1 <= 1e-3 && p1 >= 1.8 && p2 >= 1.8;
    detail += fmt("F0=%g max_err=%.3e orders=%.3f,%.3f; ", f0, e1, p1, p2);
  }
  return {ok, detail};
}

// 2. Constant and ramp inputs.
Outcome kernel_identities() {
  const double dt = 1e-4;
  const std::int64_t n = 100;
  WindowKernel kernel(n, dt, 1.0);
  bool ok = true;
  double worst_const = 0.0, worst_ramp = 0.0;
  for (double alpha : {1.0, 2.0, -0.5}) {
    WindowKernel k(n, dt, alpha);
    for (double y0 : {0.0, 1.0, -7.5}) {
      for (double u : {0.0, 1.0, -3.0}) {
        SignalWindow<double> w(n + 1);
        for (std::int64_t j = 0; j <= n; ++j) w.push(y0, u);
        const double err = std::abs(k.estimate(w).value + alpha * u);
        const double scale = std::max({std::abs(alpha * u), std::abs(y0), 1.0});
        worst_const = std::max(worst_const, err / scale);
        ok = ok && err <= 1e-12 * static_cast<double>(n) * scale;
      }
    }
  }
  for (double slope : {1.0, -4.0, 250.0}) {
    SignalWindow<double> w(n + 1);
    for (std::int64_t j = 0; j <= n; ++j) w.push(slope * (0.7 + static_cast<double>(j) * dt), 0.0);
    const double rel = std::abs(kernel.estimate(w).value - slope) / std::abs(slope);
    worst_ramp = std::max(worst_ramp, rel);
    ok = ok && rel <= 1e-6;
  }
  return {ok, fmt("const rel err %.2e (bound %.1e), ramp rel err %.2e", worst_const,
                  1e-12 * static_cast<double>(n), worst_ramp)};
}

// 3. Cancellation of F on the ultra-local plant.
Outcome closed_loop_cancellation() {
  auto worst_dev = [](EstimatorKind kind) {
    auto c = *find_scenario("ultralocal-cancel");
    c.estimator_kind = kind;
    const auto r = run_scenario(c);
    const double e0 = r.trace.front().e;
    double worst = 0.0;
    for (double t : {1.0, 2.0, 3.0}) {
      const auto& row = r.trace.at(static_cast<std::size_t>(std::llround(t / c.grid.dt)));
      worst = std::max(worst, std::abs(row.e - e0 * std::exp(-c.gains.kp * t)) / std::abs(e0));
    }
    return worst;
  };
  const double oracle_dev = worst_dev(EstimatorKind::oracle);
  const double window_dev = worst_dev(EstimatorKind::window);
  return {oracle_dev <= 0.01 && window_dev <= 0.05,
          fmt("oracle F %.3f%% of e(0) (<= 1%%), window %.3f%% (<= 5%%)", 100 * oracle_dev,
              100 * window_dev)};
}

// 4. Residual of the input-output equations along simulated trajectories.
Outcome realization_residual() {
  auto v = [](double t) { return 0.5 * std::sin(t); };
  auto vd = [](double t) { return 0.5 * std::cos(t); };
  bool ok = true;
  std::string detail;
  for (int which = 0; which < 2; ++which) {
    auto res = [&](double dt) {
      if (which == 0)
        return oracle::max_equation_residual(
            [](const StateVec& x, double u) { return system1_dynamics(x, u); },
            oracle::sys1_residual, v, vd, dt, 4.0);
      return oracle::max_equation_residual(
          [](const StateVec& x, double u) { return system2_dynamics(x, u); },
          oracle::sys2_residual, v, vd, dt, 4.0);
    };
    // Coarse grids expose the truncation order; at 1e-4 round-off of the
    // difference stencils dominates, so only the magnitude is checked there.
    const double r1 = res(0.04), r2 = res(0.02), r3 = res(0.01), fine = res(1e-4);
    const double p1 = oracle::observed_order(r1, r2), p2 = oracle::observed_order(r2, r3);
    ok = ok && p1 >= 2.0 && p2 >= 2.0 && fine < 1e-4;
    detail += fmt("sys%d orders %.2f,%.2f residual@1e-4 %.2e; ", which + 1, p1, p2, fine);
  }
  return {ok, detail};
}

// 5. Fault tolerance on both benchmarks.
Outcome fault_tolerance() {
  bool ok = true;
  std::string detail;
  for (const char* id : {"sys1-fault", "sys2-fault"}) {
    const auto c = *find_scenario(id);
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_scenario(c);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.divergence || r.metrics.recoveries.size() != 1 ||
        !r.metrics.recoveries[0].recovery_time) {
      ok = false;
      detail += fmt("%s: no recovery; ", id);
      continue;
    }
    const double t_fault = r.metrics.recoveries[0].fault_time;
    const double t_rec = t_fault + *r.metrics.recoveries[0].recovery_time;
    // Next setpoint change after the fault bounds the comparison window.
    double t_next = c.grid.dt * static_cast<double>(c.grid.n_steps);
    for (const auto& b : c.setpoint.breakpoints)
      if (b.time > t_fault) {
        t_next = b.time;
        break;
      }
    double pre = 0.0, post = 0.0, band = 0.0;
    for (const auto& row : r.trace) {
      if (row.t >= t_fault - 1.0 && row.t < t_fault) {
        pre = std::max(pre, std::abs(row.e));
        band = c.metrics_band * std::abs(row.y_ref);
      }
      if (row.t >= t_rec && row.t < t_next) post = std::max(post, std::abs(row.e));
    }
    const bool this_ok = pre <= band && post <= band && secs < 2.0;
    ok = ok && this_ok;
    detail += fmt("%s: recovery %.4g s, pre |e| %.2e, post |e| %.2e, band %.2e, %.2f s; ", id,
                  *r.metrics.recoveries[0].recovery_time, pre, post, band, secs);
  }
  return {ok, detail};
}

// 6. Saturation: large vs small step with identical gains.
Outcome saturation_degradation() {
  auto run_step = [](double amplitude) {
    auto c = *find_scenario("sys1-nominal");
    c.setpoint = Schedule::constant(amplitude);
    c.grid.n_steps = 80000;
    return run_scenario(c).metrics;
  };
  const auto small = run_step(0.25), large = run_step(2.0);
  return {large.saturation_fraction > 0.0 && large.final_error > small.final_error,
          fmt("step 2.0: saturation %.3f final |e| %.3e; step 0.25: saturation %.3f final |e| %.3e",
              large.saturation_fraction, large.final_error, small.saturation_fraction,
              small.final_error)};
}

// 7. Per-step operation budget of iP + recursive estimator + clamp.
Outcome op_budget() {
  auto c = *find_scenario("sys1-nominal");
  c.estimator_kind = EstimatorKind::recursive;
  c.grid.n_steps = 2000;
  const auto short_run = count_ops(c);
  c.grid.n_steps = 20000;
  const auto long_run = count_ops(c);
  const auto& m = long_run.max;
  const bool ok = m.add_sub <= 14 && m.mul_div <= 16 && m.conditionals <= 5 &&
                  m.assignments <= 19 && short_run.max == long_run.max;
  return {ok, fmt("max add/sub %llu, mul/div %llu, cond %llu, assign %llu; same for %lld and %lld "
                  "steps: %s",
                  static_cast<unsigned long long>(m.add_sub),
                  static_cast<unsigned long long>(m.mul_div),
                  static_cast<unsigned long long>(m.conditionals),
                  static_cast<unsigned long long>(m.assignments),
                  static_cast<long long>(short_run.steps), static_cast<long long>(long_run.steps),
                  short_run.max == long_run.max ? "yes" : "no")};
}

// 8. Byte-identical trace.csv for every built-in scenario.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "mfc_acceptance_determinism";
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool ok = true;
  std::size_t checked = 0;
  for (const auto& id : scenario_ids()) {
    auto c = *find_scenario(id);
    c.noise_std = 0.01;  // exercise the seeded generator too
    std::string trace[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path dir = root / (id + "_" + std::to_string(i));
      write_bundle(run_scenario(c), dir.string());
      trace[i] = slurp(dir / "trace.csv");
    }
    ok = ok && !trace[0].empty() && trace[0] == trace[1];
    ++checked;
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return {ok, fmt("%zu scenarios, seeded noise on, trace.csv compared byte for byte", checked)};
}

// 9. RK4 order on sys1 and the converter error bound.
Outcome rk4_and_quantization() {
  auto v = [](double t) { return 0.5 * std::sin(t); };
  auto dyn = [](const StateVec& x, double u) { return system1_dynamics(x, u); };
  auto end_value = [&](double dt) { return oracle::simulate_output(dyn, v, dt, 2.0).back(); };
  const double y1 = end_value(0.04), y2 = end_value(0.02), y3 = end_value(0.01);
  const double order = oracle::observed_order(std::abs(y1 - y2), std::abs(y2 - y3));

  std::mt19937_64 rng(1);
  const double lsb = adc_lsb(12);
  std::uniform_real_distribution<double> in_range(-3.3, 3.3 - lsb);
  double worst = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const double y = in_range(rng);
    worst = std::max(worst, std::abs(measure(y, 0.0, 12, rng) - y));
  }
  return {order >= 3.9 && worst <= 8.06e-4,
          fmt("RK4 order %.3f (>= 3.9), max quantization error %.4e (<= 8.06e-4)", order, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"estimator exactness", estimator_exactness},
      {"kernel identities", kernel_identities},
      {"closed-loop cancellation", closed_loop_cancellation},
      {"realization residual", realization_residual},
      {"fault tolerance", fault_tolerance},
      {"saturation degradation", saturation_degradation},
      {"op budget", op_budget},
      {"determinism", determinism},
      {"rk4 order and quantization bound", rk4_and_quantization},
  };
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first,
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, checks.size());
  return failures == 0 ? 0 : 1;
}
