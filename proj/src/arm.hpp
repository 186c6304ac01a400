#pragma once

#include <array>
#include <optional>
#include <vector>

#include "geom.hpp"
#include "manifold.hpp"

namespace slideplan {

// Parallel-jaw gripper. The tool frame sits at the palm center with +x toward
// the fingertips; the pinch point is at the fingertips, finger_length ahead.
struct GripperModel {
  double finger_length = 0.08;
  double finger_thickness = 0.012;
  double max_aperture = 0.10;
  double grip_force = 100.0;  // N
  Shape2 palm_shape;

  GripperModel(double flen, double fthick, double aperture, double force, Shape2 palm);
  static GripperModel standard();
};

struct JointConfig {
  std::array<double, 3> angles{0.0, 0.0, 0.0};

  double max_diff(const JointConfig& o) const;
  double l2_diff(const JointConfig& o) const;
};

// Planar 3-revolute arm; the end-effector pose is the gripper tool frame.
struct ArmModel {
  Pose2 base;
  std::array<double, 3> link_lengths{0.30, 0.25, 0.15};
  std::array<double, 3> link_widths{0.04, 0.035, 0.03};
  std::array<std::array<double, 2>, 3> joint_limits{{{-2.9, 2.9}, {-2.9, 2.9}, {-2.9, 2.9}}};
  GripperModel gripper = GripperModel::standard();

  double total_reach() const { return link_lengths[0] + link_lengths[1] + link_lengths[2]; }
  bool within_limits(const JointConfig& q) const;
};

struct Trajectory {
  std::vector<JointConfig> waypoints;
  ManifoldId manifold;

  Trajectory reversed() const;
};

Pose2 forward_kinematics(const ArmModel& arm, const JointConfig& q);

// All closed-form solutions (0, 1, or 2) satisfying joint limits, verified by
// an FK round-trip to 1e-9. Unreachable targets yield an empty list.
std::vector<JointConfig> inverse_kinematics(const ArmModel& arm, const Pose2& target);

// World-frame collision shape: link rectangles, palm, two fingers at the given
// opening. Throws std::invalid_argument on degenerate dimensions or an
// aperture outside [0, max_aperture].
Shape2 arm_shape(const ArmModel& arm, const JointConfig& q, double aperture);

// World pinch-point pose for a config (fingertips, where grasped objects sit).
Pose2 pinch_pose(const ArmModel& arm, const JointConfig& q);

struct Obstacle {
  Shape2 shape;
  Pose2 pose;
};

// Object rigidly attached to the tool frame.
struct CarriedObject {
  Shape2 shape;
  Pose2 object_from_tool;
};

struct CartesianParams {
  double step_pos = 0.01;     // m per interpolation step
  double step_ang = 0.02;     // rad per interpolation step
  double branch_bound = 0.5;  // max rad per joint per step
  double margin = 0.0;
  double aperture = 0.0;
};

bool config_in_collision(const ArmModel& arm, const JointConfig& q,
                         const std::vector<Obstacle>& obstacles,
                         const std::optional<CarriedObject>& carried, double aperture,
                         double margin);

// Straight-line end-effector interpolation from FK(start) to goal_pose; the IK
// branch nearest the previous waypoint is taken at each step. Absent when a
// step has no IK solution, the branch jumps more than branch_bound, or a
// waypoint collides.
std::optional<Trajectory> plan_cartesian(const ArmModel& arm, const JointConfig& start,
                                         const Pose2& goal_pose,
                                         const std::vector<Obstacle>& obstacles,
                                         const std::optional<CarriedObject>& carried,
                                         const CartesianParams& params, ManifoldId manifold);

}  // namespace slideplan
