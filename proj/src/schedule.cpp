#include "mfc/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "mfc/config.hpp"
#include "text.hpp"

namespace mfc {

double schedule_eval(const Schedule& s, double t) {
  const auto& bp = s.breakpoints;
  if (bp.empty()) return 0.0;
  // First breakpoint with time > t; the one before it is active.
  auto next = std::upper_bound(bp.begin(), bp.end(), t,
                               [](double lhs, const Breakpoint& b) { return lhs < b.time; });
  if (next == bp.begin()) return bp.front().value;
  auto cur = std::prev(next);
  if (s.interpolation == Interpolation::hold || next == bp.end()) return cur->value;
  const double w = (t - cur->time) / (next->time - cur->time);
  return cur->value + w * (next->value - cur->value);
}

std::vector<std::string> schedule_violations(const Schedule& s, std::string_view name) {
  std::vector<std::string> out;
  const std::string n(name);
  if (s.breakpoints.empty()) {
    out.push_back(n + " needs at least one breakpoint");
    return out;
  }
  if (s.breakpoints.front().time != 0.0) out.push_back(n + " must start at t = 0");
  for (std::size_t i = 0; i < s.breakpoints.size(); ++i) {
    const auto& b = s.breakpoints[i];
    if (!std::isfinite(b.time) || !std::isfinite(b.value)) {
      out.push_back(n + " has a non-finite breakpoint");
      break;
    }
    if (i > 0 && !(b.time > s.breakpoints[i - 1].time)) {
      out.push_back(n + " breakpoint times must be strictly increasing");
      break;
    }
  }
  return out;
}

std::string format_schedule(const Schedule& s) {
  std::string out = s.interpolation == Interpolation::hold ? "hold" : "linear";
  for (const auto& b : s.breakpoints) {
    out += ' ';
    out += text::exact(b.time);
    out += ':';
    out += text::exact(b.value);
  }
  return out;
}

Schedule parse_schedule(std::string_view src) {
  auto tokens = text::split_ws(text::trim(src));
  if (tokens.empty()) throw ConfigError("empty schedule");
  Schedule s;
  std::size_t first = 0;
  if (tokens[0] == "hold") {
    first = 1;
  } else if (tokens[0] == "linear") {
    s.interpolation = Interpolation::linear;
    first = 1;
  } else if (tokens.size() == 1 && tokens[0].find(':') == std::string_view::npos) {
    // A bare number is a constant schedule.
    auto v = text::parse_double(tokens[0]);
    if (!v) throw ConfigError("bad schedule '" + std::string(src) + "'");
    return Schedule::constant(*v);
  }
  for (std::size_t i = first; i < tokens.size(); ++i) {
    auto colon = tokens[i].find(':');
    if (colon == std::string_view::npos)
      throw ConfigError("schedule breakpoint '" + std::string(tokens[i]) + "' is not time:value");
    auto t = text::parse_double(tokens[i].substr(0, colon));
    auto v = text::parse_double(tokens[i].substr(colon + 1));
    if (!t || !v) throw ConfigError("bad schedule breakpoint '" + std::string(tokens[i]) + "'");
    s.breakpoints.push_back({*t, *v});
  }
  if (s.breakpoints.empty()) throw ConfigError("schedule has no breakpoints");
  return s;
}

}  // namespace mfc
