#pragma once

#include <cstdint>
#include <vector>

#include "arm.hpp"
#include "geom.hpp"

namespace slideplan {

// Horizontal support surface; the top face is at y = height.
struct Table {
  double x0 = 0.15;
  double x1 = 1.05;
  double height = 0.0;
  double thickness = 0.04;

  Obstacle as_obstacle() const {
    double cx = (x0 + x1) / 2.0;
    return {Shape2({ConvexPolygon::rectangle(cx, height - thickness / 2.0, x1 - x0, thickness)},
                   1.0),
            Pose2::identity()};
  }
};

struct PlannerParams {
  // grasp analysis
  double cone_half_angle = 15.0 * M_PI / 180.0;
  double grasp_spacing = 0.02;
  double torsional_mu = 0.3;
  double patch_radius = 0.01;
  double torque_threshold_factor = 0.8;  // threshold = factor * friction torque capacity
  double com_noise_sigma = 0.0;
  // foliation
  int placement_count = 6;
  double placement_clearance = 0.01;
  double placement_min_separation = 0.04;
  double pregrasp_offset = 0.05;
  double lift_height = 0.10;
  // cartesian transitions
  double cart_step_pos = 0.01;
  double cart_step_ang = 0.02;
  double branch_bound = 0.5;
  double collision_margin = 0.0;
  double grasp_pad_clearance = 1.5e-3;
  // roadmaps
  int roadmap_samples = 300;
  int roadmap_k = 8;
  double projection_tol = 1e-6;
  int projection_retry_factor = 10;
  int validation_budget = 5000;
  double interp_step = 0.05;
  double transfer_clearance = 0.05;
  // mdp
  double gamma = 0.95;
  double r_target = 100.0;
  double r_step = -1.0;
  double r_failure = -100.0;
  double vi_tol = 1e-9;
  int vi_max_iters = 100000;
  double decay = 0.2;
  double decay_similar = 0.2;
  // orchestration
  int episode_budget = 30;
  double stability_epsilon = 0.01;
};

struct Scene {
  Table table;
  ArmModel arm;
  std::vector<Obstacle> obstacles;
  Shape2 target{{ConvexPolygon::rectangle(0.0, 0.02, 0.2, 0.04)}, 10.0};
  Pose2 start_placement;
  Pose2 goal_placement;
  JointConfig initial_config;
  PlannerParams params;
  uint64_t seed = 0;

  // Table plus scene obstacles (everything static).
  std::vector<Obstacle> static_obstacles() const {
    std::vector<Obstacle> out;
    out.reserve(obstacles.size() + 1);
    out.push_back(table.as_obstacle());
    for (const Obstacle& o : obstacles) out.push_back(o);
    return out;
  }

  // Pose y that rests the target on the table at the given orientation.
  double rest_y(double theta) const { return table.height - target.bottom_offset(theta); }
};

}  // namespace slideplan
