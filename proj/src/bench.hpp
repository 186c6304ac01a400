#pragma once

#include <cstdint>
#include <string>

namespace slideplan {

inline constexpr uint64_t kDefaultSuiteSeed = 42;

// Runs multimodal, baseline, and dijkstra-task over the 12-scene suite and
// returns the metrics table as CSV, one row per (scene, planner), sorted.
// Timing is zeroed unless with_timing is set, keeping the bytes deterministic.
std::string run_bench_csv(uint64_t suite_seed, bool with_timing);

}  // namespace slideplan
