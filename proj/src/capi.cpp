#include "mfc/mfc.h"

#include <cstring>
#include <string>
#include <vector>

#include "mfc/config.hpp"
#include "mfc/harness.hpp"
#include "mfc/output.hpp"
#include "mfc/plant.hpp"

struct mfc_config {
  mfc::SimConfig cfg;
  std::vector<std::string> violations;
};

struct mfc_result {
  mfc::RunResult run;
};

namespace {

thread_local std::string last_error;

mfc_status fail(mfc_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <class F>
mfc_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const mfc::ConfigError& e) {
    return fail(MFC_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MFC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MFC_ERR_INTERNAL, e.what());
  }
}

mfc_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf && cap == 0) return MFC_OK;  // size query
  if (!buf || cap < s.size() + 1) return fail(MFC_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return MFC_OK;
}

mfc_op_counts to_c(const mfc::OpCounts& c) {
  return {c.add_sub, c.mul_div, c.conditionals, c.assignments};
}

const std::vector<std::string>& scenario_cache() {
  static const std::vector<std::string> ids = mfc::scenario_ids();
  return ids;
}

}  // namespace

extern "C" {

const char* mfc_version(void) { return "1.0.0"; }

const char* mfc_status_string(mfc_status s) {
  switch (s) {
    case MFC_OK:
      return "ok";
    case MFC_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case MFC_ERR_PARSE:
      return "parse error";
    case MFC_ERR_VALIDATION:
      return "validation failed";
    case MFC_ERR_DIVERGENCE:
      return "plant diverged";
    case MFC_ERR_IO:
      return "i/o error";
    case MFC_ERR_NOT_FOUND:
      return "not found";
    case MFC_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* mfc_last_error(void) { return last_error.c_str(); }

size_t mfc_scenario_count(void) { return scenario_cache().size(); }

const char* mfc_scenario_id(size_t index) {
  const auto& ids = scenario_cache();
  return index < ids.size() ? ids[index].c_str() : nullptr;
}

size_t mfc_plant_count(void) { return mfc::plant_registry().size(); }

const char* mfc_plant_id(size_t index) {
  const auto& reg = mfc::plant_registry();
  return index < reg.size() ? reg[index].id.data() : nullptr;
}

const char* mfc_plant_description(size_t index) {
  const auto& reg = mfc::plant_registry();
  return index < reg.size() ? reg[index].description.data() : nullptr;
}

mfc_status mfc_config_new(mfc_config** out) {
  if (!out) return fail(MFC_ERR_INVALID_ARGUMENT, "null output handle");
  return guarded([&] {
    *out = new mfc_config{};
    return MFC_OK;
  });
}

mfc_status mfc_config_from_scenario(const char* id, mfc_config** out) {
  if (!id || !out) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto c = mfc::find_scenario(id);
    if (!c) return fail(MFC_ERR_NOT_FOUND, std::string("unknown scenario '") + id + "'");
    *out = new mfc_config{std::move(*c), {}};
    return MFC_OK;
  });
}

mfc_status mfc_config_from_string(const char* text, mfc_config** out) {
  if (!text || !out) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mfc_config{mfc::parse_config(text), {}};
    return MFC_OK;
  });
}

mfc_status mfc_config_from_file(const char* path, mfc_config** out) {
  if (!path || !out) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::FILE* f = std::fopen(path, "rb");
    if (!f) return fail(MFC_ERR_IO, std::string("cannot read config file '") + path + "'");
    std::fclose(f);
    *out = new mfc_config{mfc::load_config_file(path), {}};
    return MFC_OK;
  });
}

mfc_status mfc_config_clone(const mfc_config* cfg, mfc_config** out) {
  if (!cfg || !out) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mfc_config{cfg->cfg, {}};
    return MFC_OK;
  });
}

void mfc_config_free(mfc_config* cfg) { delete cfg; }

mfc_status mfc_config_set(mfc_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    mfc::set_config_value(cfg->cfg, key, value);
    return MFC_OK;
  });
}

mfc_status mfc_config_get(const mfc_config* cfg, const char* key, char* buf, size_t cap,
                          size_t* needed) {
  if (!cfg || !key) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return copy_out(mfc::get_config_value(cfg->cfg, key), buf, cap, needed); });
}

int mfc_config_key_is_numeric(const char* key) { return key && mfc::is_numeric_key(key) ? 1 : 0; }

mfc_status mfc_config_serialize(const mfc_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return fail(MFC_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&] { return copy_out(mfc::serialize_config(cfg->cfg), buf, cap, needed); });
}

mfc_status mfc_config_validate(mfc_config* cfg, size_t* violation_count) {
  if (!cfg) return fail(MFC_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    cfg->violations = mfc::validate_config(cfg->cfg);
    if (violation_count) *violation_count = cfg->violations.size();
    if (cfg->violations.empty()) return MFC_OK;
    return fail(MFC_ERR_VALIDATION, cfg->violations.front());
  });
}

const char* mfc_config_violation(const mfc_config* cfg, size_t index) {
  if (!cfg || index >= cfg->violations.size()) return nullptr;
  return cfg->violations[index].c_str();
}

mfc_status mfc_run(const mfc_config* cfg, int instrument_ops, mfc_result** out) {
  if (!cfg || !out) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto violations = mfc::validate_config(cfg->cfg);
    if (!violations.empty()) return fail(MFC_ERR_VALIDATION, violations.front());
    auto* res = new mfc_result{mfc::run_scenario(cfg->cfg, {.instrument_ops = instrument_ops != 0})};
    *out = res;
    if (res->run.divergence) return fail(MFC_ERR_DIVERGENCE, res->run.divergence->message);
    return MFC_OK;
  });
}

void mfc_result_free(mfc_result* res) { delete res; }

size_t mfc_result_trace_length(const mfc_result* res) { return res ? res->run.trace.size() : 0; }

mfc_status mfc_result_trace_row(const mfc_result* res, size_t index, mfc_trace_row* row) {
  if (!res || !row) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= res->run.trace.size()) return fail(MFC_ERR_INVALID_ARGUMENT, "row index out of range");
  const auto& r = res->run.trace[index];
  *row = {r.t, r.y_ref, r.y_true, r.y_meas, r.e, r.f_est, r.u, r.v, r.pi};
  return MFC_OK;
}

mfc_status mfc_result_metrics(const mfc_result* res, mfc_metrics* out) {
  if (!res || !out) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  const auto& m = res->run.metrics;
  *out = {m.rms_error,   m.iae,         m.max_abs_error,       m.saturation_fraction,
          m.final_error, m.f_error_rms, m.recoveries.size()};
  return MFC_OK;
}

mfc_status mfc_result_recovery(const mfc_result* res, size_t index, double* fault_time,
                               int* recovered, double* recovery_time) {
  if (!res) return fail(MFC_ERR_INVALID_ARGUMENT, "null result");
  const auto& recs = res->run.metrics.recoveries;
  if (index >= recs.size()) return fail(MFC_ERR_INVALID_ARGUMENT, "fault index out of range");
  if (fault_time) *fault_time = recs[index].fault_time;
  if (recovered) *recovered = recs[index].recovery_time ? 1 : 0;
  if (recovery_time) *recovery_time = recs[index].recovery_time.value_or(0.0);
  return MFC_OK;
}

int mfc_result_diverged(const mfc_result* res) { return res && res->run.divergence ? 1 : 0; }

mfc_status mfc_result_ops(const mfc_result* res, mfc_op_report* out) {
  if (!res || !out) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  if (!res->run.ops) return fail(MFC_ERR_INVALID_ARGUMENT, "run was not instrumented");
  const auto& o = *res->run.ops;
  *out = {to_c(o.max),        to_c(o.last),          o.mean_add_sub, o.mean_mul_div,
          o.mean_conditionals, o.mean_assignments, o.steps};
  return MFC_OK;
}

mfc_status mfc_result_write_bundle(const mfc_result* res, const char* out_dir) {
  if (!res || !out_dir) return fail(MFC_ERR_INVALID_ARGUMENT, "null argument");
  try {
    last_error.clear();
    mfc::write_bundle(res->run, out_dir);
    return MFC_OK;
  } catch (const std::exception& e) {
    return fail(MFC_ERR_IO, e.what());
  }
}

}  // extern "C"
