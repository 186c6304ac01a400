#include "foliation.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace slideplan {

namespace {

// Bounding box of the object at a resting pose, inflated by the clearance.
Shape2 inflated_bbox(const Shape2& object, double theta, double clearance) {
  Shape2 rotated = object.transformed(Pose2{0.0, 0.0, theta});
  Aabb box = rotated.aabb();
  double w = box.hi.x - box.lo.x + 2.0 * clearance;
  double h = box.hi.y - box.lo.y + 2.0 * clearance;
  double cx = (box.lo.x + box.hi.x) / 2.0;
  double cy = (box.lo.y + box.hi.y) / 2.0;
  return Shape2({ConvexPolygon::rectangle(cx, cy, w, h)}, 1.0);
}

}  // namespace

std::vector<Pose2> sample_placements(const Scene& scene, const Shape2& object, int count,
                                     uint64_t seed) {
  const double theta = scene.start_placement.theta;
  const double y = scene.rest_y(theta);
  Shape2 probe = inflated_bbox(object, theta, scene.params.placement_clearance);
  Aabb local = object.transformed(Pose2{0.0, 0.0, theta}).aabb();

  std::vector<Pose2> placements{scene.start_placement};
  Rng rng(seed);
  const int max_attempts = 20 * std::max(count, 1);
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(placements.size()) < count + 1;
       ++attempt) {
    double x = rng.uniform(scene.table.x0, scene.table.x1);
    // Full support on the table span.
    if (x + local.lo.x < scene.table.x0 || x + local.hi.x > scene.table.x1) continue;
    bool close = false;
    for (const Pose2& p : placements)
      if (std::abs(p.x - x) < scene.params.placement_min_separation) close = true;
    if (close) continue;
    Pose2 pose{x, y, theta};
    bool blocked = false;
    for (const Obstacle& obs : scene.obstacles)
      if (shapes_intersect(probe, Pose2{pose.x, pose.y, 0.0}, obs.shape, obs.pose)) blocked = true;
    if (blocked) continue;
    placements.push_back(pose);
  }
  return placements;
}

FoliationModel build_foliation(const Scene& scene,
                               const std::vector<std::pair<Grasp, GraspQuality>>& grasps,
                               const std::vector<Pose2>& placements) {
  if (placements.empty()) throw std::invalid_argument("build_foliation: no placements");
  if (grasps.empty()) throw std::invalid_argument("build_foliation: no grasps");

  FoliationModel model;
  model.placements = placements;
  model.resting_theta = scene.start_placement.theta;
  model.grasps = grasps;  // classify() order: ascending torque
  for (std::size_t i = 0; i < model.grasps.size(); ++i)
    model.grasps[i].first.id = static_cast<int>(i);

  bool any_high = false;
  for (std::size_t p = 0; p < placements.size(); ++p)
    model.manifolds.push_back(ManifoldId::regrasp(static_cast<int>(p)));
  for (std::size_t g = 0; g < model.grasps.size(); ++g)
    model.manifolds.push_back(ManifoldId::slide(static_cast<int>(g)));
  for (std::size_t g = 0; g < model.grasps.size(); ++g) {
    if (model.grasps[g].second.label == GraspLabel::HighQuality) {
      model.manifolds.push_back(ManifoldId::transfer(static_cast<int>(g)));
      any_high = true;
    }
  }
  if (!any_high) throw NoHighQualityGraspError();
  return model;
}

double grasp_aperture(const GripperModel& gripper, double width, double pad_clearance) {
  return std::min(width + 2.0 * pad_clearance, gripper.max_aperture);
}

std::vector<TransitionSample> sample_transitions(FoliationModel& model, const Scene& scene,
                                                 double pregrasp_offset, double lift_height) {
  std::vector<TransitionSample> transitions;
  const std::vector<Obstacle> statics = scene.static_obstacles();
  model.skipped_transitions = 0;

  for (std::size_t p = 0; p < model.placements.size(); ++p) {
    const Pose2& placement = model.placements[p];
    std::vector<Obstacle> with_object = statics;
    with_object.push_back({scene.target, placement});

    for (std::size_t g = 0; g < model.grasps.size(); ++g) {
      const Grasp& grasp = model.grasps[g].first;
      const bool high_quality = model.grasps[g].second.label == GraspLabel::HighQuality;
      const Pose2 grip_world = compose(placement, grasp.object_frame_pose);
      const Pose2 pregrasp = compose(grip_world, Pose2{-pregrasp_offset, 0.0, 0.0});

      CartesianParams cart;
      cart.step_pos = scene.params.cart_step_pos;
      cart.step_ang = scene.params.cart_step_ang;
      cart.branch_bound = scene.params.branch_bound;
      cart.margin = scene.params.collision_margin;
      cart.aperture =
          grasp_aperture(scene.arm.gripper, grasp.width, scene.params.grasp_pad_clearance);

      const auto ik = inverse_kinematics(scene.arm, grip_world);
      if (ik.empty()) {
        ++model.skipped_transitions;
        continue;
      }
      for (std::size_t branch = 0; branch < ik.size(); ++branch) {
        const JointConfig& q_grasp = ik[branch];
        auto release = plan_cartesian(scene.arm, q_grasp, pregrasp, with_object, std::nullopt,
                                      cart, ManifoldId::slide(static_cast<int>(g)));
        if (!release) {
          ++model.skipped_transitions;
          continue;
        }
        TransitionSample rel;
        rel.id = static_cast<int>(transitions.size());
        rel.from = ManifoldId::slide(static_cast<int>(g));
        rel.to = ManifoldId::regrasp(static_cast<int>(p));
        rel.trajectory = *release;
        rel.end_config = release->waypoints.back();
        rel.placement = static_cast<int>(p);
        rel.grasp = static_cast<int>(g);
        rel.ik_branch = static_cast<int>(branch);
        transitions.push_back(rel);

        TransitionSample app;
        app.id = static_cast<int>(transitions.size());
        app.from = rel.to;
        app.to = rel.from;
        app.trajectory = release->reversed();
        app.trajectory.manifold = ManifoldId::regrasp(static_cast<int>(p));
        app.end_config = q_grasp;
        app.placement = rel.placement;
        app.grasp = rel.grasp;
        app.ik_branch = rel.ik_branch;
        transitions.push_back(app);

        if (high_quality) {
          Pose2 lifted{grip_world.x, grip_world.y + lift_height, grip_world.theta};
          CarriedObject carried{scene.target, inverse(grasp.object_frame_pose)};
          auto lift = plan_cartesian(scene.arm, q_grasp, lifted, statics, carried, cart,
                                     ManifoldId::slide(static_cast<int>(g)));
          if (!lift) {
            ++model.skipped_transitions;
            continue;
          }
          TransitionSample up;
          up.id = static_cast<int>(transitions.size());
          up.from = ManifoldId::slide(static_cast<int>(g));
          up.to = ManifoldId::transfer(static_cast<int>(g));
          up.trajectory = *lift;
          up.end_config = lift->waypoints.back();
          up.placement = static_cast<int>(p);
          up.grasp = static_cast<int>(g);
          up.ik_branch = static_cast<int>(branch);
          transitions.push_back(up);
        }
      }
    }
  }
  model.transitions = transitions;
  return transitions;
}

}  // namespace slideplan
