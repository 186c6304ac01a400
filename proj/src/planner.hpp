#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdp.hpp"
#include "motion.hpp"

namespace slideplan {

enum class PlanStatus { Solved, NoViablePolicy, BudgetExhausted, NoHighQualityGrasp };

const char* to_string(PlanStatus status);

enum class SegmentKind { RegraspMove, Approach, Release, Lift, SlideMove, TransferMove };

const char* to_string(SegmentKind kind);

// One spliced piece of the full trajectory: either a solved intra-manifold
// task or a pre-sampled inter-manifold transition.
struct PlanSegment {
  ManifoldId manifold;
  SegmentKind kind = SegmentKind::RegraspMove;
  int grasp = -1;      // grasp id for grasp-bound segments
  int placement = -1;  // placement id where applicable
  std::vector<JointConfig> waypoints;

  bool is_transition() const {
    return kind == SegmentKind::Approach || kind == SegmentKind::Release ||
           kind == SegmentKind::Lift;
  }
};

struct EpisodeLog {
  int episode = 0;
  double score = 0.0;  // value of the initial state (MDP) or path cost (Dijkstra)
  std::vector<int> chosen_path;
  int failed_action = -1;
  std::vector<std::pair<int, double>> updates;  // rho or weight updates applied
};

struct PlanMetrics {
  double wall_ms = 0.0;
  long validated_edges = 0;
  long value_sweeps = 0;
};

struct PlanResult {
  PlanStatus status = PlanStatus::NoViablePolicy;
  std::string planner_name;
  std::vector<PlanSegment> segments;
  int episodes = 0;
  std::vector<EpisodeLog> episode_log;
  std::vector<Grasp> grasps;  // grasp table referenced by segment grasp ids
  int final_grasp = -1;
  double final_grasp_torque = 0.0;
  PlanMetrics metrics;
};

// Full pipeline: grasp analysis, direct pick when a high-quality grasp
// works immediately, otherwise foliation + MDP + re-planning episodes.
PlanResult plan(const Scene& scene);

// No rearrangement: grasps in ascending-torque order, first one whose
// approach + lift + transfer all succeed wins.
PlanResult plan_baseline(const Scene& scene);

// Same pipeline as plan() with the mode-transition-graph task planner.
PlanResult plan_dijkstra(const Scene& scene);

struct NoiseParams {
  double sigma_xy = 0.0;
  double sigma_theta = 0.0;

  bool enabled() const { return sigma_xy > 0.0 || sigma_theta > 0.0; }
};

struct StabilityReport {
  double delta_r = 0.0;
  double stability = 0.0;
  bool success = false;
};

// Quasi-static playback with independent collision re-checks. Every grasp
// event perturbs the in-hand pose by seeded noise; a noisy release triggers
// re-observation (the scene is rebuilt from the true pose and planning
// resumes). The final lift scores delta-R against the true COM.
StabilityReport execute(const Scene& scene, const PlanResult& result, const NoiseParams& noise,
                        uint64_t seed);

// Deterministic 12-scene benchmark suite: scenes 1-6 block every high-quality
// grasp at the start placement, scenes 7-12 place the target randomly.
std::vector<Scene> generate_scene_suite(uint64_t seed);

}  // namespace slideplan
