#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "foliation.hpp"
#include "scene.hpp"

namespace slideplan {

struct RoadmapEmptyError : std::runtime_error {
  RoadmapEmptyError() : std::runtime_error("projection never succeeded within the retry budget") {}
};

// Per-manifold constraint. Slide pins the grasped object to the table line at
// the resting orientation; Transfer pins the carry orientation and a minimum
// clearance above the table; ReGrasp is unconstrained (the parked object is
// an obstacle, handled by the collision environment).
struct ManifoldConstraint {
  ManifoldId id;
  std::optional<Shape2> object;
  Pose2 object_from_tool;
  double table_height = 0.0;
  double resting_theta = 0.0;
  double carry_theta = 0.0;
  double min_clearance = 0.0;

  static ManifoldConstraint regrasp(ManifoldId id);
  static ManifoldConstraint slide(ManifoldId id, const Shape2& object, const Grasp& grasp,
                                  double table_height, double resting_theta);
  static ManifoldConstraint transfer(ManifoldId id, const Shape2& object, const Grasp& grasp,
                                     double table_height, double carry_theta,
                                     double min_clearance);

  Pose2 object_pose(const ArmModel& arm, const JointConfig& q) const;
};

double residual(const ManifoldConstraint& constraint, const ArmModel& arm, const JointConfig& q);

// Analytic projection: snap the implied object pose onto the manifold, then
// re-solve IK taking the branch nearest q. Absent when the snapped pose has no
// IK solution within limits.
std::optional<JointConfig> project(const ManifoldConstraint& constraint, const ArmModel& arm,
                                   const JointConfig& q);

enum class EdgeValidity { Unknown, Valid, Invalid };

struct RoadmapEdge {
  int a = -1;
  int b = -1;
  double length = 0.0;
  EdgeValidity validity = EdgeValidity::Unknown;
};

struct Roadmap {
  ManifoldId manifold;
  std::vector<JointConfig> nodes;
  std::vector<RoadmapEdge> edges;
  std::vector<std::vector<int>> adjacency;  // edge ids per node
  uint64_t seed = 0;
  long validations = 0;  // lifetime count of edge validations
};

// Uniform joint-space samples projected onto the manifold and wired to the k
// nearest neighbors; no collision checking happens here (all edges Unknown).
Roadmap build_roadmap(const ManifoldConstraint& constraint, const ArmModel& arm,
                      const PlannerParams& params, int n_samples, int k, uint64_t seed);

// Collision context for one manifold: static obstacles (plus the parked
// object in ReGrasp) and the carried object in Slide/Transfer.
struct CollisionEnv {
  std::vector<Obstacle> obstacles;
  std::optional<CarriedObject> carried;
  double aperture = 0.0;
  double margin = 0.0;
};

bool env_collides(const ArmModel& arm, const JointConfig& q, const CollisionEnv& env);

struct QueryStats {
  int validated_edges = 0;
};

// LazyPRM query: shortest paths over non-invalid edges, validating unknown
// edges along each candidate until one is fully valid, no path remains, or
// the validation budget runs out. Validation interpolates at interp_step,
// projects every intermediate config, and collision-checks arm and carried
// object. Start and goal must already satisfy the constraint.
std::optional<Trajectory> lazy_query(Roadmap& roadmap, const ManifoldConstraint& constraint,
                                     const ArmModel& arm, const CollisionEnv& env,
                                     const JointConfig& start, const JointConfig& goal,
                                     int budget, const PlannerParams& params,
                                     QueryStats* stats = nullptr);

}  // namespace slideplan
