#pragma once

#include <stdexcept>
#include <vector>

#include "grasping.hpp"
#include "manifold.hpp"
#include "scene.hpp"

namespace slideplan {

// Inter-manifold action sample: the trajectory crosses from one manifold into
// the other; its first waypoint satisfies both constraints.
struct TransitionSample {
  int id = -1;
  ManifoldId from;
  ManifoldId to;
  Trajectory trajectory;
  JointConfig end_config;
  int placement = -1;  // placement the action grasps/releases/lifts at
  int grasp = -1;
  int ik_branch = 0;

  const JointConfig& start_config() const { return trajectory.waypoints.front(); }
};

// No transfer manifold exists anywhere, so the task is unsolvable regardless
// of rearrangement.
struct NoHighQualityGraspError : std::runtime_error {
  NoHighQualityGraspError() : std::runtime_error("no high-quality grasp on the object") {}
};

// The three-foliation model of one scene. Grasps are re-indexed 0..n-1 in
// ascending-torque order so manifold co-parameters are stable ids.
struct FoliationModel {
  std::vector<Pose2> placements;  // placement 0 is the start placement
  std::vector<std::pair<Grasp, GraspQuality>> grasps;
  std::vector<ManifoldId> manifolds;
  std::vector<TransitionSample> transitions;
  double resting_theta = 0.0;
  int skipped_transitions = 0;

  const Grasp& grasp(int id) const { return grasps.at(id).first; }
  bool is_high_quality(int id) const {
    return grasps.at(id).second.label == GraspLabel::HighQuality;
  }
};

// Collision-free resting poses on the table line at the start placement's
// orientation; placement 0 is always the start placement. May return fewer
// than count+1 poses when the table is crowded.
std::vector<Pose2> sample_placements(const Scene& scene, const Shape2& object, int count,
                                     uint64_t seed);

// Assembles manifolds per the co-parameter rules: one ReGrasp leaf per
// placement, one Slide leaf per grasp, one Transfer leaf per high-quality
// grasp. Throws NoHighQualityGraspError when no transfer leaf exists.
FoliationModel build_foliation(const Scene& scene,
                               const std::vector<std::pair<Grasp, GraspQuality>>& grasps,
                               const std::vector<Pose2>& placements);

// Samples approach/release twins at every (placement, grasp, IK branch) and a
// vertical lift per high-quality grasping configuration. Pairs without an IK
// solution or a collision-free Cartesian path are skipped and counted.
std::vector<TransitionSample> sample_transitions(FoliationModel& model, const Scene& scene,
                                                 double pregrasp_offset, double lift_height);

// Gripper opening used around a grasp of the given width.
double grasp_aperture(const GripperModel& gripper, double width, double pad_clearance);

}  // namespace slideplan
