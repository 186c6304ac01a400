#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "arm.hpp"
#include "geom.hpp"

namespace slideplan {

// Antipodal pinch on the object boundary. object_frame_pose is the gripper
// tool frame expressed in the object frame; the fingertips close on
// contact_a/contact_b, finger_length ahead of the tool origin.
struct Grasp {
  int id = -1;
  Pose2 object_frame_pose;
  Vec2 contact_a;
  Vec2 contact_b;
  double width = 0.0;
  Vec2 pinch_normal;  // unit vector a -> b

  Vec2 center() const { return (contact_a + contact_b) * 0.5; }
};

enum class GraspLabel { HighQuality, LowQuality };

struct GraspQuality {
  double torque = 0.0;  // N*m
  GraspLabel label = GraspLabel::LowQuality;
};

struct ComEstimate {
  Vec2 point;
  double mass = 0.0;  // kg
};

// Boundary points every `spacing` cast an inward ray along the negative edge
// normal; a grasp is emitted when the opposite union-boundary hit has an
// anti-parallel normal within cone_half_angle and separation within the
// aperture. Both approach headings perpendicular to the pinch axis are kept.
std::vector<Grasp> sample_grasps(const Shape2& object, const GripperModel& gripper,
                                 double cone_half_angle, double spacing);

// Analytic centroid plus seeded isotropic Gaussian noise clamped to the
// object's bounding box; the mass is always exact.
ComEstimate estimate_com(const Shape2& object, double noise_sigma, uint64_t seed);

// Gravitational torque about the pinch center with the object held at
// carry_orientation: tau = m * g * |horizontal offset to the COM|.
double grasp_torque(const Grasp& g, const ComEstimate& com, double carry_orientation);

// Sorted ascending by torque; HighQuality iff torque <= threshold.
std::vector<std::pair<Grasp, GraspQuality>> classify(const std::vector<Grasp>& grasps,
                                                     const ComEstimate& com, double threshold,
                                                     double carry_orientation = 0.0);

// Rotational slip after lifting, in radians. Zero when the friction torque
// capacity (torsional_mu * grip_force * patch_radius) holds the gravitational
// torque; otherwise the pivot angle until the COM hangs below the pinch
// center.
double lift_rotation(const Grasp& g, const ComEstimate& com, const GripperModel& gripper,
                     double torsional_mu, double patch_radius, double carry_orientation = 0.0);

constexpr double kGravity = 9.81;

}  // namespace slideplan
