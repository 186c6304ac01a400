#include "arm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slideplan {

GripperModel::GripperModel(double flen, double fthick, double aperture, double force, Shape2 palm)
    : finger_length(flen),
      finger_thickness(fthick),
      max_aperture(aperture),
      grip_force(force),
      palm_shape(std::move(palm)) {
  if (max_aperture <= 0.0) throw std::invalid_argument("GripperModel: max_aperture must be > 0");
  if (grip_force <= 0.0) throw std::invalid_argument("GripperModel: grip_force must be > 0");
  if (finger_length <= 0.0 || finger_thickness <= 0.0)
    throw std::invalid_argument("GripperModel: degenerate finger dimensions");
}

GripperModel GripperModel::standard() {
  // Palm block behind the tool frame, wide enough to root both fingers.
  Shape2 palm({ConvexPolygon::rectangle(-0.015, 0.0, 0.03, 0.13)}, 1.0);
  return GripperModel(0.08, 0.012, 0.10, 100.0, std::move(palm));
}

double JointConfig::max_diff(const JointConfig& o) const {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(angles[i] - o.angles[i]));
  return d;
}

double JointConfig::l2_diff(const JointConfig& o) const {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    double d = angles[i] - o.angles[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool ArmModel::within_limits(const JointConfig& q) const {
  for (int i = 0; i < 3; ++i) {
    double a = q.angles[i];
    const double lo = joint_limits[i][0], hi = joint_limits[i][1];
    bool ok = false;
    for (int k = -1; k <= 1 && !ok; ++k) {
      double cand = a + 2.0 * M_PI * k;
      ok = cand >= lo - 1e-12 && cand <= hi + 1e-12;
    }
    if (!ok) return false;
  }
  return true;
}

Trajectory Trajectory::reversed() const {
  Trajectory out;
  out.manifold = manifold;
  out.waypoints.assign(waypoints.rbegin(), waypoints.rend());
  return out;
}

Pose2 forward_kinematics(const ArmModel& arm, const JointConfig& q) {
  double theta = arm.base.theta;
  Vec2 p{arm.base.x, arm.base.y};
  for (int i = 0; i < 3; ++i) {
    theta += q.angles[i];
    p = p + Vec2{std::cos(theta), std::sin(theta)} * arm.link_lengths[i];
  }
  return {p.x, p.y, theta};
}

std::vector<JointConfig> inverse_kinematics(const ArmModel& arm, const Pose2& target) {
  const double l1 = arm.link_lengths[0], l2 = arm.link_lengths[1], l3 = arm.link_lengths[2];
  // Express the target in the base frame.
  Pose2 local = compose(inverse(arm.base), target);
  const double phi = local.theta;
  const Vec2 wrist{local.x - l3 * std::cos(phi), local.y - l3 * std::sin(phi)};
  const double r_sq = wrist.norm_sq();
  double c2 = (r_sq - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
  if (c2 > 1.0 + 1e-9 || c2 < -1.0 - 1e-9) return {};
  c2 = std::clamp(c2, -1.0, 1.0);
  const double elbow = std::acos(c2);

  std::vector<JointConfig> solutions;
  auto add_branch = [&](double theta2) {
    double theta1 = std::atan2(wrist.y, wrist.x) -
                    std::atan2(l2 * std::sin(theta2), l1 + l2 * std::cos(theta2));
    double theta3 = phi - theta1 - theta2;
    JointConfig q{{normalize_angle(theta1), normalize_angle(theta2), normalize_angle(theta3)}};
    if (!arm.within_limits(q)) return;
    Pose2 reached = forward_kinematics(arm, q);
    if (std::hypot(reached.x - target.x, reached.y - target.y) > 1e-9) return;
    if (std::abs(normalize_angle(reached.theta - target.theta)) > 1e-9) return;
    for (const JointConfig& existing : solutions)
      if (existing.max_diff(q) < 1e-9) return;
    solutions.push_back(q);
  };
  add_branch(elbow);
  add_branch(-elbow);
  return solutions;
}

namespace {

ConvexPolygon segment_rectangle(const Vec2& a, const Vec2& b, double width) {
  Vec2 dir = (b - a).normalized();
  Vec2 n = dir.perp() * (width / 2.0);
  return ConvexPolygon({a - n, b - n, b + n, a + n});
}

}  // namespace

Pose2 pinch_pose(const ArmModel& arm, const JointConfig& q) {
  Pose2 tool = forward_kinematics(arm, q);
  return compose(tool, Pose2{arm.gripper.finger_length, 0.0, 0.0});
}

Shape2 arm_shape(const ArmModel& arm, const JointConfig& q, double aperture) {
  for (int i = 0; i < 3; ++i) {
    if (arm.link_lengths[i] <= 0.0 || arm.link_widths[i] <= 0.0)
      throw std::invalid_argument("arm_shape: degenerate link dimensions");
  }
  if (aperture < -1e-12 || aperture > arm.gripper.max_aperture + 1e-12)
    throw std::invalid_argument("arm_shape: aperture outside [0, max_aperture]");

  std::vector<ConvexPolygon> parts;
  double theta = arm.base.theta;
  Vec2 p{arm.base.x, arm.base.y};
  for (int i = 0; i < 3; ++i) {
    theta += q.angles[i];
    Vec2 next = p + Vec2{std::cos(theta), std::sin(theta)} * arm.link_lengths[i];
    parts.push_back(segment_rectangle(p, next, arm.link_widths[i]));
    p = next;
  }

  Pose2 tool = forward_kinematics(arm, q);
  for (const auto& palm_part : arm.gripper.palm_shape.parts)
    parts.push_back(palm_part.transformed(tool));

  const double t = arm.gripper.finger_thickness;
  const double len = arm.gripper.finger_length;
  const double half = aperture / 2.0;
  parts.push_back(
      ConvexPolygon({{0.0, half}, {len, half}, {len, half + t}, {0.0, half + t}}).transformed(tool));
  parts.push_back(
      ConvexPolygon({{0.0, -half - t}, {len, -half - t}, {len, -half}, {0.0, -half}})
          .transformed(tool));
  return Shape2(std::move(parts), 1.0);
}

bool config_in_collision(const ArmModel& arm, const JointConfig& q,
                         const std::vector<Obstacle>& obstacles,
                         const std::optional<CarriedObject>& carried, double aperture,
                         double margin) {
  Shape2 body = arm_shape(arm, q, aperture);
  std::optional<Pose2> carried_pose;
  if (carried) carried_pose = compose(forward_kinematics(arm, q), carried->object_from_tool);
  for (const Obstacle& obs : obstacles) {
    if (shapes_intersect(body, Pose2::identity(), obs.shape, obs.pose, margin)) return true;
    if (carried &&
        shapes_intersect(carried->shape, *carried_pose, obs.shape, obs.pose, margin))
      return true;
  }
  return false;
}

std::optional<Trajectory> plan_cartesian(const ArmModel& arm, const JointConfig& start,
                                         const Pose2& goal_pose,
                                         const std::vector<Obstacle>& obstacles,
                                         const std::optional<CarriedObject>& carried,
                                         const CartesianParams& params, ManifoldId manifold) {
  if (config_in_collision(arm, start, obstacles, carried, params.aperture, params.margin))
    return std::nullopt;

  Pose2 from = forward_kinematics(arm, start);
  const double dist = std::hypot(goal_pose.x - from.x, goal_pose.y - from.y);
  const double dtheta = normalize_angle(goal_pose.theta - from.theta);

  Trajectory traj;
  traj.manifold = manifold;
  traj.waypoints.push_back(start);
  if (dist < 1e-12 && std::abs(dtheta) < 1e-12) return traj;

  const int steps = std::max({static_cast<int>(std::ceil(dist / params.step_pos)),
                              static_cast<int>(std::ceil(std::abs(dtheta) / params.step_ang)), 1});
  JointConfig prev = start;
  for (int i = 1; i <= steps; ++i) {
    double t = static_cast<double>(i) / steps;
    Pose2 pose{from.x + t * (goal_pose.x - from.x), from.y + t * (goal_pose.y - from.y),
               from.theta + t * dtheta};
    std::vector<JointConfig> sols = inverse_kinematics(arm, pose);
    if (sols.empty()) return std::nullopt;
    const JointConfig* best = nullptr;
    double best_diff = 1e300;
    for (const JointConfig& s : sols) {
      double d = s.max_diff(prev);
      if (d < best_diff) {
        best_diff = d;
        best = &s;
      }
    }
    if (best_diff > params.branch_bound) return std::nullopt;
    if (config_in_collision(arm, *best, obstacles, carried, params.aperture, params.margin))
      return std::nullopt;
    traj.waypoints.push_back(*best);
    prev = *best;
  }
  return traj;
}

}  // namespace slideplan
