// mfcsim: command-line front end over the libmfc C interface.
//
//   mfcsim list
//   mfcsim run   --config <file|scenario> --out <dir> [--set key=value]... [--instrument-ops]
//   mfcsim sweep --config <file|scenario> --key <key> --values a,b,c --out <dir> [--set ...]

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfc/mfc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitDiverged = 2;

struct ConfigDeleter {
  void operator()(mfc_config* c) const { mfc_config_free(c); }
};
struct ResultDeleter {
  void operator()(mfc_result* r) const { mfc_result_free(r); }
};
using ConfigPtr = std::unique_ptr<mfc_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<mfc_result, ResultDeleter>;

void report(const std::string& what) {
  std::cerr << "mfcsim: " << what << ": " << mfc_last_error() << "\n";
}

/// A readable file wins; otherwise `scenarios/<id>` or `<id>` names a
/// built-in scenario.
ConfigPtr load(const std::string& source) {
  mfc_config* raw = nullptr;
  if (std::filesystem::is_regular_file(source)) {
    if (mfc_config_from_file(source.c_str(), &raw) != MFC_OK) {
      report("cannot load " + source);
      return nullptr;
    }
    return ConfigPtr(raw);
  }
  std::string id = std::filesystem::path(source).filename().string();
  if (mfc_config_from_scenario(id.c_str(), &raw) != MFC_OK) {
    std::cerr << "mfcsim: '" << source << "' is neither a config file nor a built-in scenario\n";
    return nullptr;
  }
  return ConfigPtr(raw);
}

bool apply_overrides(mfc_config* cfg, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "mfcsim: override '" << s << "' is not key=value\n";
      return false;
    }
    const std::string key = s.substr(0, eq);
    const std::string value = s.substr(eq + 1);
    if (mfc_config_set(cfg, key.c_str(), value.c_str()) != MFC_OK) {
      report("override " + s);
      return false;
    }
  }
  return true;
}

bool print_violations(mfc_config* cfg) {
  size_t n = 0;
  if (mfc_config_validate(cfg, &n) == MFC_OK) return true;
  std::cerr << "mfcsim: invalid configuration (" << n << " violation" << (n == 1 ? "" : "s") << ")\n";
  for (size_t i = 0; i < n; ++i) std::cerr << "  " << mfc_config_violation(cfg, i) << "\n";
  return false;
}

std::string get_value(const mfc_config* cfg, const char* key) {
  size_t needed = 0;
  mfc_config_get(cfg, key, nullptr, 0, &needed);
  std::string buf(needed, '\0');
  if (mfc_config_get(cfg, key, buf.data(), buf.size(), &needed) != MFC_OK) return {};
  buf.resize(needed - 1);
  return buf;
}

/// Runs one config and writes its bundle. Returns the process exit code.
int run_one(mfc_config* cfg, const std::string& out_dir, bool instrument, mfc_metrics* metrics) {
  if (!print_violations(cfg)) return kExitInvalid;
  mfc_result* raw = nullptr;
  const mfc_status st = mfc_run(cfg, instrument ? 1 : 0, &raw);
  ResultPtr res(raw);
  if (st != MFC_OK && st != MFC_ERR_DIVERGENCE) {
    report("run failed");
    return kExitInvalid;
  }
  if (st == MFC_ERR_DIVERGENCE) std::cerr << "mfcsim: " << mfc_last_error() << "\n";
  if (mfc_result_write_bundle(res.get(), out_dir.c_str()) != MFC_OK) {
    report("cannot write bundle");
    return kExitInvalid;
  }
  if (metrics) mfc_result_metrics(res.get(), metrics);
  return st == MFC_ERR_DIVERGENCE ? kExitDiverged : kExitOk;
}

int cmd_list() {
  std::cout << "scenarios:\n";
  for (size_t i = 0; i < mfc_scenario_count(); ++i) std::cout << "  " << mfc_scenario_id(i) << "\n";
  std::cout << "plants:\n";
  for (size_t i = 0; i < mfc_plant_count(); ++i)
    std::cout << "  " << mfc_plant_id(i) << "  " << mfc_plant_description(i) << "\n";
  return kExitOk;
}

int cmd_run(const std::string& config, const std::string& out_dir,
            const std::vector<std::string>& sets, bool instrument) {
  auto cfg = load(config);
  if (!cfg || !apply_overrides(cfg.get(), sets)) return kExitInvalid;
  const int rc = run_one(cfg.get(), out_dir, instrument, nullptr);
  if (rc != kExitInvalid) std::cout << "wrote " << out_dir << "\n";
  return rc;
}

std::string dir_safe(const std::string& s) {
  std::string out;
  for (char ch : s) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') ? ch : '_';
  return out;
}

int cmd_sweep(const std::string& config, const std::string& key,
              const std::vector<std::string>& values, const std::string& out_dir,
              const std::vector<std::string>& sets, bool instrument) {
  if (values.empty()) {
    std::cerr << "mfcsim: sweep needs at least one value\n";
    return kExitInvalid;
  }
  if (!mfc_config_key_is_numeric(key.c_str())) {
    std::cerr << "mfcsim: sweep key '" << key << "' is not a numeric config field\n";
    return kExitInvalid;
  }
  auto base = load(config);
  if (!base || !apply_overrides(base.get(), sets)) return kExitInvalid;

  // Sweeping the sample period keeps the simulated horizon fixed.
  const double horizon = std::stod(get_value(base.get(), "grid.dt")) *
                         std::stod(get_value(base.get(), "grid.n_steps"));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ofstream summary(std::filesystem::path(out_dir) / "sweep.csv");
  if (!summary) {
    std::cerr << "mfcsim: cannot write sweep summary in " << out_dir << "\n";
    return kExitInvalid;
  }
  summary << "index,key,value,exit_code,rms_error,iae,max_abs_error,saturation_fraction,"
             "final_error,f_error_rms\n";

  int worst = kExitOk;
  for (size_t i = 0; i < values.size(); ++i) {
    mfc_config* raw = nullptr;
    if (mfc_config_clone(base.get(), &raw) != MFC_OK) {
      report("clone");
      return kExitInvalid;
    }
    ConfigPtr cfg(raw);
    if (mfc_config_set(cfg.get(), key.c_str(), values[i].c_str()) != MFC_OK) {
      report("sweep value " + values[i]);
      return kExitInvalid;
    }
    if (key == "grid.dt") {
      const double dt = std::stod(get_value(cfg.get(), "grid.dt"));
      const auto steps = std::to_string(static_cast<long long>(std::llround(horizon / dt)));
      mfc_config_set(cfg.get(), "grid.n_steps", steps.c_str());
    }
    const std::string sub =
        (std::filesystem::path(out_dir) / (std::to_string(i) + "_" + dir_safe(values[i]))).string();
    mfc_metrics m{};
    const int rc = run_one(cfg.get(), sub, instrument, &m);
    worst = std::max(worst, rc);
    char line[512];
    std::snprintf(line, sizeof line, "%zu,%s,%s,%d,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e\n", i,
                  key.c_str(), values[i].c_str(), rc, m.rms_error, m.iae, m.max_abs_error,
                  m.saturation_fraction, m.final_error, m.f_error_rms);
    summary << line;
  }
  std::cout << "wrote " << values.size() << " runs and sweep.csv to " << out_dir << "\n";
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-free control simulator: intelligent P/PI/PD/PID loops on benchmark plants"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::vector<std::string> sets;
  bool instrument = false;

  auto* list = app.add_subcommand("list", "Print built-in scenarios and plants");

  auto* run = app.add_subcommand("run", "Run one scenario and write its output bundle");
  run->add_option("--config,-c", config, "Config file or built-in scenario id")->required();
  run->add_option("--out,-o", out_dir, "Output directory")->required();
  run->add_option("--set", sets, "Override key=value (repeatable)");
  run->add_flag("--instrument-ops", instrument, "Tally per-step operations into metrics.txt");

  std::string key;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "Run one scenario per value of a numeric key");
  sweep->add_option("--config,-c", config, "Config file or built-in scenario id")->required();
  sweep->add_option("--key,-k", key, "Numeric config key")->required();
  sweep->add_option("--values", values, "Comma-separated values")->delimiter(',');
  sweep->add_option("--out,-o", out_dir, "Output directory")->required();
  sweep->add_option("--set", sets, "Override key=value (repeatable)");
  sweep->add_flag("--instrument-ops", instrument, "Tally per-step operations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  if (*list) return cmd_list();
  if (*run) return cmd_run(config, out_dir, sets, instrument);
  if (*sweep) return cmd_sweep(config, key, values, out_dir, sets, instrument);
  return kExitInvalid;
}
