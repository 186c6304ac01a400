/* slideplan: planar slide-and-regrasp task-and-motion planning engine.
 *
 * C interface over the planning core. All objects are opaque handles created
 * and destroyed through this API; every string or frame array returned
 * through an out-parameter is heap-allocated and must be released with
 * sp_string_free / sp_frames_free. Functions return SP_OK on success; on
 * failure, *out_error (when present) receives a diagnostic string.
 */

#ifndef SLIDEPLAN_SLIDEPLAN_H
#define SLIDEPLAN_SLIDEPLAN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sp_status {
  SP_OK = 0,
  SP_ERR_INVALID_ARGUMENT = 1,
  SP_ERR_PARSE = 2,
  SP_ERR_PLANNING_FAILED = 3,
  SP_ERR_HASH_MISMATCH = 4,
  SP_ERR_INTERNAL = 5
} sp_status;

typedef struct sp_scene sp_scene;
typedef struct sp_plan sp_plan;

const char* sp_status_name(sp_status status);
void sp_string_free(char* str);

/* Scene files: versioned JSON documents. Unknown fields are rejected; the
 * diagnostic carries the offending field path. */
sp_status sp_scene_parse(const char* json, sp_scene** out_scene, char** out_error);
void sp_scene_free(sp_scene* scene);
sp_status sp_scene_canonical_json(const sp_scene* scene, char** out_json);

/* planner: "multimodal", "baseline", or "dijkstra-task".
 * seed_override: -1 keeps the scene's seed.
 * with_timing: nonzero embeds wall-clock times in the plan JSON (output is
 * no longer byte-reproducible across runs). */
sp_status sp_plan_run(const sp_scene* scene, const char* planner, long long seed_override,
                      int with_timing, sp_plan** out_plan, char** out_error);
void sp_plan_free(sp_plan* plan);
sp_status sp_plan_to_json(const sp_plan* plan, char** out_json);
sp_status sp_plan_parse(const char* json, sp_plan** out_plan, char** out_error);
int sp_plan_solved(const sp_plan* plan);

/* Quasi-static execution with optional in-hand pose noise; writes a one-line
 * JSON stability record. Rejects plans whose scene hash does not match. */
sp_status sp_evaluate(const sp_scene* scene, const sp_plan* plan, double noise_xy,
                      double noise_theta, unsigned long long seed, char** out_report_json,
                      char** out_error);

/* Full 12-scene suite under all three planners; returns the metrics CSV. */
sp_status sp_bench_csv(unsigned long long suite_seed, int with_timing, char** out_csv,
                       char** out_error);

/* One SVG document per `stride` trajectory waypoints. */
sp_status sp_render_frames(const sp_scene* scene, const sp_plan* plan, int stride,
                           char*** out_frames, size_t* out_count, char** out_error);
void sp_frames_free(char** frames, size_t count);

#ifdef __cplusplus
}
#endif

#endif /* SLIDEPLAN_SLIDEPLAN_H */
