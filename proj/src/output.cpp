#include "mfc/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "text.hpp"

namespace mfc {

namespace {

void append_sci(std::string& out, double x) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.12e", x);
  out.append(buf, static_cast<std::size_t>(n));
}

std::string metric(double x) { return text::exact(x); }

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace

std::string format_trace_csv(std::span<const TraceRow> trace) {
  std::string out = kTraceHeader;
  out += '\n';
  out.reserve(trace.size() * 9 * 20 + out.size());
  for (const auto& r : trace) {
    const double cols[] = {r.t, r.y_ref, r.y_true, r.y_meas, r.e, r.f_est, r.u, r.v, r.pi};
    for (std::size_t i = 0; i < 9; ++i) {
      if (i) out += ',';
      append_sci(out, cols[i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_metrics(const RunResult& r) {
  const Metrics& m = r.metrics;
  std::string out;
  auto line = [&out](const std::string& k, const std::string& v) { out += k + ": " + v + "\n"; };
  line("steps", std::to_string(r.trace.size()));
  line("rms_error", metric(m.rms_error));
  line("iae", metric(m.iae));
  line("max_abs_error", metric(m.max_abs_error));
  line("saturation_fraction", metric(m.saturation_fraction));
  line("final_error", metric(m.final_error));
  line("f_error_rms", metric(m.f_error_rms));
  line("fault_events", std::to_string(m.recoveries.size()));
  for (std::size_t i = 0; i < m.recoveries.size(); ++i) {
    const auto& rec = m.recoveries[i];
    const std::string idx = "[" + std::to_string(i) + "]";
    line("fault_time" + idx, metric(rec.fault_time));
    line("recovery_time_after_fault" + idx,
         rec.recovery_time ? metric(*rec.recovery_time) : std::string("none"));
  }
  line("seed", std::to_string(r.seed_used));
  if (r.divergence) {
    line("diverged_at", metric(r.divergence->time));
    line("divergence", r.divergence->message);
  }
  if (r.ops) {
    const OpReport& o = *r.ops;
    line("ops.steps", std::to_string(o.steps));
    line("ops.add_sub.max", std::to_string(o.max.add_sub));
    line("ops.mul_div.max", std::to_string(o.max.mul_div));
    line("ops.conditionals.max", std::to_string(o.max.conditionals));
    line("ops.assignments.max", std::to_string(o.max.assignments));
    line("ops.add_sub.mean", metric(o.mean_add_sub));
    line("ops.mul_div.mean", metric(o.mean_mul_div));
    line("ops.conditionals.mean", metric(o.mean_conditionals));
    line("ops.assignments.mean", metric(o.mean_assignments));
  }
  return out;
}

std::string format_plot_script(const SimConfig& c) {
  const std::string lim = text::exact(c.v_limit);
  std::string s;
  s += "# gnuplot script; run from the bundle directory: gnuplot -p plot.gp\n";
  s += "set datafile separator ','\n";
  s += "set key autotitle columnhead\n";
  s += "set xlabel 'time (s)'\n";
  s += "set multiplot layout 3,1 title '" + c.plant_id + " / " +
       std::string(to_string(c.controller_kind)) + "'\n";
  s += "set title 'Control (-- blue) and control limits (- - red)'\n";
  s += "plot 'trace.csv' using 1:8 with lines lc rgb 'blue' dt 1 title 'v', \\\n";
  s += "     " + lim + " with lines lc rgb 'red' dt 2 title 'limit', \\\n";
  s += "     -" + lim + " with lines lc rgb 'red' dt 2 notitle\n";
  s += "set title 'Setpoint (- - black) and output (-- blue)'\n";
  s += "plot 'trace.csv' using 1:2 with lines lc rgb 'black' dt 2 title 'setpoint', \\\n";
  s += "     'trace.csv' using 1:3 with lines lc rgb 'blue' dt 1 title 'output'\n";
  s += "set title 'Multiplicative power loss'\n";
  s += "set yrange [0:1.1]\n";
  s += "plot 'trace.csv' using 1:9 with lines lc rgb 'blue' title 'pi'\n";
  s += "unset multiplot\n";
  return s;
}

void write_bundle(const RunResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
  write_file(root / "trace.csv", format_trace_csv(r.trace));
  write_file(root / "metrics.txt", format_metrics(r));
  write_file(root / "config.echo", serialize_config(r.config_echo));
  write_file(root / "plot.gp", format_plot_script(r.config_echo));
}

}  // namespace mfc
