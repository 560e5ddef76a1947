#include "mfc/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "mfc/plant.hpp"
#include "text.hpp"

namespace mfc {

std::string_view to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::iP:
      return "iP";
    case ControllerKind::iPI:
      return "iPI";
    case ControllerKind::iPD:
      return "iPD";
    case ControllerKind::iPID:
      return "iPID";
  }
  return "?";
}

std::string_view to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::window:
      return "window";
    case EstimatorKind::recursive:
      return "recursive";
    case EstimatorKind::oracle:
      return "oracle";
  }
  return "?";
}

std::optional<ControllerKind> parse_controller_kind(std::string_view s) {
  for (auto k : {ControllerKind::iP, ControllerKind::iPI, ControllerKind::iPD, ControllerKind::iPID})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::optional<EstimatorKind> parse_estimator_kind(std::string_view s) {
  for (auto k : {EstimatorKind::window, EstimatorKind::recursive, EstimatorKind::oracle})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::int64_t SimConfig::window_intervals() const {
  if (!(grid.dt > 0.0)) return 0;
  return static_cast<std::int64_t>(std::llround(tau / grid.dt));
}

std::vector<std::string> validate_config(const SimConfig& c) {
  std::vector<std::string> v;
  auto check = [&v](bool ok, std::string msg) {
    if (!ok) v.push_back(std::move(msg));
  };

  check(c.grid.dt > 0.0 && std::isfinite(c.grid.dt), "grid.dt must be positive");
  check(c.grid.n_steps >= 1, "grid.n_steps must be at least 1");
  check(c.grid.substeps >= 1, "grid.substeps must be at least 1");

  const auto& g = c.gains;
  check(g.alpha != 0.0 && std::isfinite(g.alpha), "alpha must be nonzero");
  check(g.nu == 1 || g.nu == 2, "gains.nu must be 1 or 2");
  check(g.kp >= 0.0 && g.ki >= 0.0 && g.kd >= 0.0, "gains kp, ki, kd must be non-negative");
  check(!(g.nu == 1 && g.kd != 0.0), "gains.kd must be 0 when nu = 1");

  const bool first_order = c.controller_kind == ControllerKind::iP ||
                           c.controller_kind == ControllerKind::iPI;
  check(first_order == (g.nu == 1),
        "controller_kind " + std::string(to_string(c.controller_kind)) +
            " does not match derivation order nu = " + std::to_string(g.nu) +
            " (iP/iPI need nu = 1, iPD/iPID need nu = 2)");
  check(!(c.controller_kind == ControllerKind::iP && g.ki != 0.0),
        "controller_kind iP requires gains.ki = 0");

  check(c.tau >= 2.0 * c.grid.dt, "tau must be at least 2 * grid.dt");
  if (c.estimator_kind == EstimatorKind::window && c.grid.dt > 0.0 && c.tau >= 2.0 * c.grid.dt) {
    const double n = c.tau / c.grid.dt;
    check(std::abs(n - std::round(n)) <= 1e-6 * n,
          "tau must be an integer multiple of grid.dt for the window estimator");
  }
  check(!(c.estimator_kind == EstimatorKind::recursive && g.nu != 1),
        "recursive estimator requires nu = 1");

  for (auto& m : schedule_violations(c.setpoint, "setpoint")) v.push_back(m);
  for (auto& m : schedule_violations(c.fault, "fault")) v.push_back(m);
  for (const auto& b : c.fault.breakpoints) {
    if (!(b.value >= 0.0 && b.value <= 1.0)) {
      v.push_back("fault values must lie in [0, 1]");
      break;
    }
  }

  check(c.noise_std >= 0.0, "noise_std must be non-negative");
  check(c.quant_bits == 0 || c.quant_bits == 12, "quant_bits must be 0 or 12");
  check(c.v_limit > 0.0 && std::isfinite(c.v_limit), "v_limit must be positive");
  check(c.prefilter_tc >= 0.0, "prefilter_tc must be non-negative");
  check(c.estimator_tc >= 0.0, "estimator_tc must be non-negative");
  check(!c.deriv_tc || *c.deriv_tc >= 0.0, "deriv_tc must be non-negative");
  check(c.metrics_band > 0.0, "metrics.band must be positive");
  check(c.metrics_dwell >= 0.0, "metrics.dwell must be non-negative");

  const PlantInfo* plant = find_plant(c.plant_id);
  if (!plant) {
    v.push_back("unknown plant_id '" + c.plant_id + "'");
  } else {
    check(c.plant_x0.empty() || c.plant_x0.size() == plant->dim,
          "plant.x0 must have " + std::to_string(plant->dim) + " entries for " + c.plant_id);
    if (plant->kind == PlantKind::ultralocal)
      for (auto& m : schedule_violations(c.plant_f, "plant.f")) v.push_back(m);
  }
  return v;
}

namespace {

struct KeyDef {
  std::string name;
  bool numeric;
  std::function<void(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

double need_double(std::string_view key, std::string_view v) {
  auto d = text::parse_double(v);
  if (!d) throw ConfigError("key '" + std::string(key) + "': '" + std::string(v) + "' is not a number");
  return *d;
}

std::int64_t need_int(std::string_view key, std::string_view v) {
  if (auto i = text::parse_int(v)) return *i;
  // Accept integral values written in floating form, e.g. 1e5.
  auto d = text::parse_double(v);
  if (d && std::isfinite(*d) && std::floor(*d) == *d && std::abs(*d) < 9e15)
    return static_cast<std::int64_t>(*d);
  throw ConfigError("key '" + std::string(key) + "': '" + std::string(v) + "' is not an integer");
}

KeyDef dbl(std::string name, double SimConfig::*field) {
  return {name, true,
          [name, field](SimConfig& c, std::string_view v) { c.*field = need_double(name, v); },
          [field](const SimConfig& c) { return text::exact(c.*field); }};
}

template <class Sub>
KeyDef sub_dbl(std::string name, Sub SimConfig::*outer, double Sub::*field) {
  return {name, true,
          [name, outer, field](SimConfig& c, std::string_view v) {
            c.*outer.*field = need_double(name, v);
          },
          [outer, field](const SimConfig& c) { return text::exact(c.*outer.*field); }};
}

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> t;
    t.push_back(sub_dbl("grid.dt", &SimConfig::grid, &TimeGrid::dt));
    t.push_back({"grid.n_steps", true,
                 [](SimConfig& c, std::string_view v) { c.grid.n_steps = need_int("grid.n_steps", v); },
                 [](const SimConfig& c) { return std::to_string(c.grid.n_steps); }});
    t.push_back({"grid.substeps", true,
                 [](SimConfig& c, std::string_view v) {
                   c.grid.substeps = need_int("grid.substeps", v);
                 },
                 [](const SimConfig& c) { return std::to_string(c.grid.substeps); }});
    t.push_back(sub_dbl("gains.alpha", &SimConfig::gains, &Gains::alpha));
    t.push_back(sub_dbl("gains.kp", &SimConfig::gains, &Gains::kp));
    t.push_back(sub_dbl("gains.ki", &SimConfig::gains, &Gains::ki));
    t.push_back(sub_dbl("gains.kd", &SimConfig::gains, &Gains::kd));
    t.push_back({"gains.nu", true,
                 [](SimConfig& c, std::string_view v) {
                   c.gains.nu = static_cast<int>(need_int("gains.nu", v));
                 },
                 [](const SimConfig& c) { return std::to_string(c.gains.nu); }});
    t.push_back({"plant_id", false,
                 [](SimConfig& c, std::string_view v) { c.plant_id = std::string(v); },
                 [](const SimConfig& c) { return c.plant_id; }});
    t.push_back({"controller_kind", false,
                 [](SimConfig& c, std::string_view v) {
                   auto k = parse_controller_kind(v);
                   if (!k) throw ConfigError("unknown controller_kind '" + std::string(v) + "'");
                   c.controller_kind = *k;
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.controller_kind)); }});
    t.push_back({"estimator_kind", false,
                 [](SimConfig& c, std::string_view v) {
                   auto k = parse_estimator_kind(v);
                   if (!k) throw ConfigError("unknown estimator_kind '" + std::string(v) + "'");
                   c.estimator_kind = *k;
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.estimator_kind)); }});
    t.push_back(dbl("tau", &SimConfig::tau));
    t.push_back({"setpoint", false,
                 [](SimConfig& c, std::string_view v) { c.setpoint = parse_schedule(v); },
                 [](const SimConfig& c) { return format_schedule(c.setpoint); }});
    t.push_back({"fault", false,
                 [](SimConfig& c, std::string_view v) { c.fault = parse_schedule(v); },
                 [](const SimConfig& c) { return format_schedule(c.fault); }});
    t.push_back(dbl("noise_std", &SimConfig::noise_std));
    t.push_back({"quant_bits", true,
                 [](SimConfig& c, std::string_view v) {
                   c.quant_bits = static_cast<int>(need_int("quant_bits", v));
                 },
                 [](const SimConfig& c) { return std::to_string(c.quant_bits); }});
    t.push_back(dbl("v_limit", &SimConfig::v_limit));
    t.push_back({"seed", true,
                 [](SimConfig& c, std::string_view v) {
                   auto i = need_int("seed", v);
                   if (i < 0) throw ConfigError("seed must be non-negative");
                   c.seed = static_cast<std::uint64_t>(i);
                 },
                 [](const SimConfig& c) { return std::to_string(c.seed); }});
    t.push_back(dbl("prefilter_tc", &SimConfig::prefilter_tc));
    t.push_back(dbl("estimator_tc", &SimConfig::estimator_tc));
    t.push_back({"deriv_tc", true,
                 [](SimConfig& c, std::string_view v) {
                   if (text::trim(v) == "auto")
                     c.deriv_tc.reset();
                   else
                     c.deriv_tc = need_double("deriv_tc", v);
                 },
                 [](const SimConfig& c) {
                   return c.deriv_tc ? text::exact(*c.deriv_tc) : std::string("auto");
                 }});
    t.push_back({"plant.x0", false,
                 [](SimConfig& c, std::string_view v) {
                   std::vector<double> x;
                   for (auto tok : text::split_ws(text::trim(v))) x.push_back(need_double("plant.x0", tok));
                   c.plant_x0 = std::move(x);
                 },
                 [](const SimConfig& c) {
                   if (c.plant_x0.empty()) return std::string("origin");
                   std::string s;
                   for (double x : c.plant_x0) s += (s.empty() ? "" : " ") + text::exact(x);
                   return s;
                 }});
    t.push_back({"plant.f", false,
                 [](SimConfig& c, std::string_view v) { c.plant_f = parse_schedule(v); },
                 [](const SimConfig& c) { return format_schedule(c.plant_f); }});
    t.push_back(dbl("plant.alpha", &SimConfig::plant_alpha));
    t.push_back(dbl("metrics.band", &SimConfig::metrics_band));
    t.push_back(dbl("metrics.dwell", &SimConfig::metrics_dwell));
    return t;
  }();
  return table;
}

const KeyDef& find_key(std::string_view key) {
  for (const auto& k : key_table())
    if (k.name == key) return k;
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

void set_config_value(SimConfig& c, std::string_view key, std::string_view value) {
  const auto& k = find_key(text::trim(key));
  auto v = text::trim(value);
  // "origin" resets the initial state.
  if (k.name == "plant.x0" && v == "origin") {
    c.plant_x0.clear();
    return;
  }
  k.set(c, v);
}

std::string get_config_value(const SimConfig& c, std::string_view key) {
  return find_key(text::trim(key)).get(c);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& k : key_table()) out.push_back(k.name);
    return out;
  }();
  return keys;
}

bool is_numeric_key(std::string_view key) {
  for (const auto& k : key_table())
    if (k.name == key) return k.numeric;
  return false;
}

SimConfig parse_config(std::string_view src, SimConfig base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= src.size()) {
    auto end = src.find('\n', pos);
    if (end == std::string_view::npos) end = src.size();
    auto line = src.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    try {
      set_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimConfig& c) {
  std::string out;
  for (const auto& k : key_table()) {
    out += k.name;
    out += " = ";
    out += k.get(c);
    out += '\n';
  }
  return out;
}

void apply_overrides(SimConfig& c, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    set_config_value(c, std::string_view(o).substr(0, eq), std::string_view(o).substr(eq + 1));
  }
}

}  // namespace mfc
