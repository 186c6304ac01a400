#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "foliation.hpp"
#include "test_scenes.hpp"

using namespace slideplan;
using test_scenes::desk_scene;

namespace {

std::vector<std::pair<Grasp, GraspQuality>> classified_grasps(const Scene& scene) {
  auto grasps = sample_grasps(scene.target, scene.arm.gripper, scene.params.cone_half_angle,
                              scene.params.grasp_spacing);
  ComEstimate com = estimate_com(scene.target, 0.0, scene.seed);
  double cap = scene.params.torsional_mu * scene.arm.gripper.grip_force *
               scene.params.patch_radius;
  return classify(grasps, com, cap * scene.params.torque_threshold_factor,
                  scene.start_placement.theta);
}

int count_kind(const FoliationModel& m, ManifoldId::Kind kind) {
  int n = 0;
  for (const ManifoldId& id : m.manifolds)
    if (id.kind == kind) ++n;
  return n;
}

// Object pose implied by a grasping configuration.
Pose2 object_pose_at(const Scene& scene, const Grasp& g, const JointConfig& q) {
  return compose(forward_kinematics(scene.arm, q), inverse(g.object_frame_pose));
}

}  // namespace

TEST_CASE("sample_placements on an empty table") {
  Scene scene = desk_scene();
  auto placements = sample_placements(scene, scene.target, 5, 42);
  CHECK(placements.size() == 6);  // 5 sampled plus the start placement
  CHECK(placements[0].x == doctest::Approx(scene.start_placement.x));
  for (const Pose2& p : placements) {
    CHECK(p.y == doctest::Approx(scene.rest_y(scene.start_placement.theta)));
    CHECK(p.theta == doctest::Approx(scene.start_placement.theta));
  }
}

TEST_CASE("sample_placements with a crowded table keeps only the start") {
  Scene scene = desk_scene();
  // Cover the table except a sliver around the start placement.
  scene.obstacles.push_back(test_scenes::box_obstacle(0.275, 0.25, 0.3));
  scene.obstacles.push_back(test_scenes::box_obstacle(0.875, 0.35, 0.3));
  scene.obstacles.push_back(test_scenes::box_obstacle(0.45, 0.02, 0.3));
  auto placements = sample_placements(scene, scene.target, 8, 42);
  CHECK(placements.size() == 1);
}

TEST_CASE("sample_placements rejects the obstructed half") {
  Scene scene = desk_scene();
  scene.obstacles.push_back(test_scenes::box_obstacle(0.825, 0.45, 0.3));
  auto placements = sample_placements(scene, scene.target, 8, 42);
  CHECK(placements.size() > 1);
  for (std::size_t i = 1; i < placements.size(); ++i) CHECK(placements[i].x < 0.6);
}

TEST_CASE("sample_placements is deterministic per seed") {
  Scene scene = desk_scene();
  auto a = sample_placements(scene, scene.target, 6, 7);
  auto b = sample_placements(scene, scene.target, 6, 7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].x == b[i].x);
}

TEST_CASE("build_foliation manifold counts") {
  Scene scene = desk_scene();
  ComEstimate com{{0.0, 0.02}, 0.3};
  auto mk = [&](double cx, GraspLabel label) {
    Grasp g;
    g.contact_a = {cx - 0.015, 0.04};
    g.contact_b = {cx + 0.015, 0.04};
    g.width = 0.03;
    g.pinch_normal = {1, 0};
    g.object_frame_pose = Pose2{cx, 0.12, -M_PI / 2};
    return std::make_pair(g, GraspQuality{std::abs(cx) * com.mass * kGravity, label});
  };
  std::vector<Pose2> placements{scene.start_placement, Pose2{0.3, 0.0, 0.0},
                                Pose2{0.7, 0.0, 0.0}};

  SUBCASE("two high plus one low across three placements") {
    std::vector<std::pair<Grasp, GraspQuality>> grasps{
        mk(0.0, GraspLabel::HighQuality), mk(0.02, GraspLabel::HighQuality),
        mk(0.13, GraspLabel::LowQuality)};
    FoliationModel model = build_foliation(scene, grasps, placements);
    CHECK(count_kind(model, ManifoldId::Kind::ReGrasp) == 3);
    CHECK(count_kind(model, ManifoldId::Kind::Slide) == 3);
    CHECK(count_kind(model, ManifoldId::Kind::Transfer) == 2);
  }
  SUBCASE("no high-quality grasp raises the dedicated error") {
    std::vector<std::pair<Grasp, GraspQuality>> grasps{mk(0.13, GraspLabel::LowQuality)};
    CHECK_THROWS_AS(build_foliation(scene, grasps, placements), NoHighQualityGraspError);
  }
  SUBCASE("minimal model counts follow the quality label") {
    std::vector<Pose2> single{scene.start_placement};
    std::vector<std::pair<Grasp, GraspQuality>> high{mk(0.0, GraspLabel::HighQuality)};
    FoliationModel model = build_foliation(scene, high, single);
    CHECK(model.manifolds.size() == 3);  // 1 + 1 + 1
    std::vector<std::pair<Grasp, GraspQuality>> low{mk(0.13, GraspLabel::LowQuality)};
    CHECK_THROWS_AS(build_foliation(scene, low, single), NoHighQualityGraspError);
  }
}

TEST_CASE("sample_transitions") {
  Scene scene = desk_scene();
  auto grasps = classified_grasps(scene);
  REQUIRE(!grasps.empty());

  SUBCASE("unreachable placement contributes no transitions") {
    std::vector<Pose2> placements{scene.start_placement, Pose2{0.95, 0.0, 0.0}};
    FoliationModel model = build_foliation(scene, grasps, placements);
    auto transitions = sample_transitions(model, scene, scene.params.pregrasp_offset,
                                          scene.params.lift_height);
    REQUIRE(!transitions.empty());
    for (const TransitionSample& t : transitions) CHECK(t.placement != 1);
  }

  SUBCASE("a grasp blocked by an adjacent obstacle is skipped only there") {
    Scene blocked = scene;
    // Box hugging the center tab at the start placement.
    blocked.obstacles.push_back(test_scenes::box_obstacle(0.475, 0.016, 0.12));
    auto blocked_grasps = classified_grasps(blocked);
    std::vector<Pose2> placements{blocked.start_placement, Pose2{0.30, 0.0, 0.0}};
    FoliationModel model = build_foliation(blocked, blocked_grasps, placements);
    auto transitions = sample_transitions(model, blocked, blocked.params.pregrasp_offset,
                                          blocked.params.lift_height);
    REQUIRE(!transitions.empty());
    // Identify grasps pinching the center tab (pinch centers near x = 0).
    std::set<int> center_tab_at_p0, center_tab_at_p1;
    for (const TransitionSample& t : transitions) {
      const Grasp& g = model.grasp(t.grasp);
      if (std::abs(g.center().x) < 0.02 && std::abs(g.center().y - 0.047) < 0.03) {
        if (t.placement == 0) center_tab_at_p0.insert(t.grasp);
        if (t.placement == 1) center_tab_at_p1.insert(t.grasp);
      }
    }
    CHECK(center_tab_at_p0.empty());
    CHECK(!center_tab_at_p1.empty());
  }

  SUBCASE("approach is the exact reverse of its release twin") {
    std::vector<Pose2> placements{scene.start_placement, Pose2{0.30, 0.0, 0.0}};
    FoliationModel model = build_foliation(scene, grasps, placements);
    auto transitions = sample_transitions(model, scene, scene.params.pregrasp_offset,
                                          scene.params.lift_height);
    REQUIRE(!transitions.empty());
    int checked = 0;
    for (std::size_t i = 0; i + 1 < transitions.size(); ++i) {
      const TransitionSample& rel = transitions[i];
      const TransitionSample& app = transitions[i + 1];
      if (rel.from.kind != ManifoldId::Kind::Slide || app.from.kind != ManifoldId::Kind::ReGrasp)
        continue;
      if (rel.grasp != app.grasp || rel.placement != app.placement ||
          rel.ik_branch != app.ik_branch)
        continue;
      REQUIRE(rel.trajectory.waypoints.size() == app.trajectory.waypoints.size());
      std::size_t n = rel.trajectory.waypoints.size();
      for (std::size_t w = 0; w < n; ++w)
        CHECK(rel.trajectory.waypoints[w].max_diff(app.trajectory.waypoints[n - 1 - w]) == 0.0);
      ++checked;
    }
    CHECK(checked > 0);
  }

  SUBCASE("foliation structure invariants") {
    std::vector<Pose2> placements = sample_placements(scene, scene.target, 4, scene.seed);
    FoliationModel model = build_foliation(scene, grasps, placements);
    auto transitions = sample_transitions(model, scene, scene.params.pregrasp_offset,
                                          scene.params.lift_height);
    REQUIRE(!transitions.empty());
    bool saw_lift = false;
    for (const TransitionSample& t : transitions) {
      // Leaves of one foliation are disjoint: transitions always switch kinds,
      // and never directly between ReGrasp and Transfer.
      CHECK(t.from.kind != t.to.kind);
      bool regrasp_transfer =
          (t.from.kind == ManifoldId::Kind::ReGrasp && t.to.kind == ManifoldId::Kind::Transfer) ||
          (t.from.kind == ManifoldId::Kind::Transfer && t.to.kind == ManifoldId::Kind::ReGrasp);
      CHECK_FALSE(regrasp_transfer);
      if (t.to.kind == ManifoldId::Kind::Transfer) {
        saw_lift = true;
        CHECK(model.is_high_quality(t.grasp));
      }
      if (t.from.kind == ManifoldId::Kind::ReGrasp && t.to.kind == ManifoldId::Kind::Slide) {
        // Boundary waypoint: the grasped object rests on the table.
        Pose2 obj = object_pose_at(scene, model.grasp(t.grasp), t.end_config);
        double bottom = obj.y + scene.target.bottom_offset(obj.theta);
        CHECK(std::abs(bottom - scene.table.height) < 1e-6);
        CHECK(std::abs(normalize_angle(obj.theta - model.resting_theta)) < 1e-6);
      }
    }
    CHECK(saw_lift);
  }
}
