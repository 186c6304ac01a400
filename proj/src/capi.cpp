#include "slideplan/slideplan.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "bench.hpp"
#include "render.hpp"
#include "scene_io.hpp"

using namespace slideplan;

struct sp_scene {
  Scene scene;
  std::string hash;
};

struct sp_plan {
  PlanResult result;
  std::string scene_hash;
  bool with_timing = false;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** out_error, const std::string& message) {
  if (out_error) *out_error = dup_string(message);
}

}  // namespace

extern "C" {

const char* sp_status_name(sp_status status) {
  switch (status) {
    case SP_OK: return "ok";
    case SP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SP_ERR_PARSE: return "parse_error";
    case SP_ERR_PLANNING_FAILED: return "planning_failed";
    case SP_ERR_HASH_MISMATCH: return "hash_mismatch";
    case SP_ERR_INTERNAL: return "internal_error";
  }
  return "?";
}

void sp_string_free(char* str) { delete[] str; }

sp_status sp_scene_parse(const char* json, sp_scene** out_scene, char** out_error) {
  if (!json || !out_scene) {
    set_error(out_error, "null argument");
    return SP_ERR_INVALID_ARGUMENT;
  }
  *out_scene = nullptr;
  try {
    auto handle = std::make_unique<sp_scene>();
    handle->scene = scene_from_json(json);
    handle->hash = scene_hash(handle->scene);
    *out_scene = handle.release();
    return SP_OK;
  } catch (const ParseError& e) {
    set_error(out_error, e.what());
    return SP_ERR_PARSE;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return SP_ERR_INTERNAL;
  }
}

void sp_scene_free(sp_scene* scene) { delete scene; }

sp_status sp_scene_canonical_json(const sp_scene* scene, char** out_json) {
  if (!scene || !out_json) return SP_ERR_INVALID_ARGUMENT;
  *out_json = dup_string(scene_to_json(scene->scene));
  return *out_json ? SP_OK : SP_ERR_INTERNAL;
}

sp_status sp_plan_run(const sp_scene* scene, const char* planner, long long seed_override,
                      int with_timing, sp_plan** out_plan, char** out_error) {
  if (!scene || !planner || !out_plan) {
    set_error(out_error, "null argument");
    return SP_ERR_INVALID_ARGUMENT;
  }
  *out_plan = nullptr;
  std::string name = planner;
  if (name != "multimodal" && name != "baseline" && name != "dijkstra-task") {
    set_error(out_error, "unknown planner: " + name);
    return SP_ERR_INVALID_ARGUMENT;
  }
  try {
    Scene working = scene->scene;
    if (seed_override >= 0) working.seed = static_cast<uint64_t>(seed_override);
    auto handle = std::make_unique<sp_plan>();
    handle->result = name == "baseline"      ? plan_baseline(working)
                     : name == "dijkstra-task" ? plan_dijkstra(working)
                                               : plan(working);
    handle->scene_hash = scene->hash;
    handle->with_timing = with_timing != 0;
    sp_status status =
        handle->result.status == PlanStatus::Solved ? SP_OK : SP_ERR_PLANNING_FAILED;
    *out_plan = handle.release();
    return status;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return SP_ERR_INTERNAL;
  }
}

void sp_plan_free(sp_plan* plan) { delete plan; }

sp_status sp_plan_to_json(const sp_plan* plan, char** out_json) {
  if (!plan || !out_json) return SP_ERR_INVALID_ARGUMENT;
  *out_json = dup_string(plan_to_json(plan->result, plan->scene_hash, plan->with_timing));
  return *out_json ? SP_OK : SP_ERR_INTERNAL;
}

sp_status sp_plan_parse(const char* json, sp_plan** out_plan, char** out_error) {
  if (!json || !out_plan) {
    set_error(out_error, "null argument");
    return SP_ERR_INVALID_ARGUMENT;
  }
  *out_plan = nullptr;
  try {
    LoadedPlan loaded = plan_from_json(json);
    auto handle = std::make_unique<sp_plan>();
    handle->result = std::move(loaded.result);
    handle->scene_hash = loaded.scene_hash;
    *out_plan = handle.release();
    return SP_OK;
  } catch (const ParseError& e) {
    set_error(out_error, e.what());
    return SP_ERR_PARSE;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return SP_ERR_INTERNAL;
  }
}

int sp_plan_solved(const sp_plan* plan) {
  return plan && plan->result.status == PlanStatus::Solved ? 1 : 0;
}

sp_status sp_evaluate(const sp_scene* scene, const sp_plan* plan, double noise_xy,
                      double noise_theta, unsigned long long seed, char** out_report_json,
                      char** out_error) {
  if (!scene || !plan || !out_report_json) {
    set_error(out_error, "null argument");
    return SP_ERR_INVALID_ARGUMENT;
  }
  *out_report_json = nullptr;
  if (plan->scene_hash != scene->hash) {
    set_error(out_error, "plan was produced for a different scene (hash " + plan->scene_hash +
                             " != " + scene->hash + ")");
    return SP_ERR_HASH_MISMATCH;
  }
  try {
    StabilityReport report =
        execute(scene->scene, plan->result, NoiseParams{noise_xy, noise_theta}, seed);
    *out_report_json = dup_string(report_to_json(report));
    return SP_OK;
  } catch (const std::invalid_argument& e) {
    set_error(out_error, e.what());
    return SP_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return SP_ERR_INTERNAL;
  }
}

sp_status sp_bench_csv(unsigned long long suite_seed, int with_timing, char** out_csv,
                       char** out_error) {
  if (!out_csv) return SP_ERR_INVALID_ARGUMENT;
  try {
    *out_csv = dup_string(run_bench_csv(suite_seed, with_timing != 0));
    return SP_OK;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return SP_ERR_INTERNAL;
  }
}

sp_status sp_render_frames(const sp_scene* scene, const sp_plan* plan, int stride,
                           char*** out_frames, size_t* out_count, char** out_error) {
  if (!scene || !plan || !out_frames || !out_count) {
    set_error(out_error, "null argument");
    return SP_ERR_INVALID_ARGUMENT;
  }
  *out_frames = nullptr;
  *out_count = 0;
  try {
    std::vector<std::string> frames = render_frames(scene->scene, plan->result, stride);
    char** out = new char*[frames.size()];
    for (std::size_t i = 0; i < frames.size(); ++i) out[i] = dup_string(frames[i]);
    *out_frames = out;
    *out_count = frames.size();
    return SP_OK;
  } catch (const std::invalid_argument& e) {
    set_error(out_error, e.what());
    return SP_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return SP_ERR_INTERNAL;
  }
}

void sp_frames_free(char** frames, size_t count) {
  if (!frames) return;
  for (size_t i = 0; i < count; ++i) delete[] frames[i];
  delete[] frames;
}

}  // extern "C"
