#pragma once

#include <span>
#include <string>

#include "mfc/harness.hpp"

namespace mfc {

inline constexpr const char* kTraceHeader = "t,y_ref,y_true,y_meas,e,f_est,u,v,pi";

/// Header plus one row per period; every value in scientific notation with
/// 13 significant digits.
std::string format_trace_csv(std::span<const TraceRow> trace);
/// `key: value` lines; includes the op report when present.
std::string format_metrics(const RunResult& r);
/// gnuplot script reading trace.csv from its own directory.
std::string format_plot_script(const SimConfig& c);

/// Writes trace.csv, metrics.txt, config.echo and plot.gp into `dir`,
/// creating it when missing. Throws std::runtime_error on I/O failure.
void write_bundle(const RunResult& r, const std::string& dir);

}  // namespace mfc
