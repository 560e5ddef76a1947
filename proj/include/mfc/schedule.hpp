#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mfc {

enum class Interpolation { hold, linear };

struct Breakpoint {
  double time = 0.0;
  double value = 0.0;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Piecewise signal of time. Hold mode is right-continuous: the value changes
/// exactly at the breakpoint time.
struct Schedule {
  std::vector<Breakpoint> breakpoints;
  Interpolation interpolation = Interpolation::hold;

  static Schedule constant(double value) { return {{{0.0, value}}, Interpolation::hold}; }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

double schedule_eval(const Schedule& s, double t);

/// Returns a message for every broken invariant; empty when well formed.
/// `name` prefixes each message.
std::vector<std::string> schedule_violations(const Schedule& s, std::string_view name);

/// Text form: `<hold|linear> t:v t:v ...`, for example `hold 0:0.5 2:-0.5`.
std::string format_schedule(const Schedule& s);
/// Throws ConfigError on malformed text.
Schedule parse_schedule(std::string_view text);

}  // namespace mfc
