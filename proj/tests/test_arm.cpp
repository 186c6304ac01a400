#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arm.hpp"
#include "rng.hpp"

using namespace slideplan;

namespace {

ArmModel unit_arm() {
  ArmModel arm;
  arm.base = Pose2::identity();
  arm.link_lengths = {1.0, 1.0, 1.0};
  arm.link_widths = {0.05, 0.05, 0.05};
  arm.joint_limits = {{{-2.9, 2.9}, {-2.9, 2.9}, {-2.9, 2.9}}};
  return arm;
}

}  // namespace

TEST_CASE("forward kinematics") {
  ArmModel arm = unit_arm();
  SUBCASE("fully extended along x") {
    Pose2 p = forward_kinematics(arm, {{0, 0, 0}});
    CHECK(p.x == doctest::Approx(3.0));
    CHECK(p.y == doctest::Approx(0.0));
    CHECK(p.theta == doctest::Approx(0.0));
  }
  SUBCASE("rigid rotation of the extended arm") {
    Pose2 p = forward_kinematics(arm, {{M_PI / 2, 0, 0}});
    CHECK(p.x == doctest::Approx(0.0));
    CHECK(p.y == doctest::Approx(3.0));
    CHECK(p.theta == doctest::Approx(M_PI / 2));
  }
  SUBCASE("bent chain") {
    // Link 1 up to (0,1); joints 2 and 3 leave the remaining two links
    // heading along +x, ending at (2,1).
    Pose2 p = forward_kinematics(arm, {{M_PI / 2, -M_PI / 2, 0}});
    CHECK(p.x == doctest::Approx(2.0));
    CHECK(p.y == doctest::Approx(1.0));
    CHECK(p.theta == doctest::Approx(0.0));
  }
}

TEST_CASE("inverse kinematics") {
  ArmModel arm = unit_arm();
  SUBCASE("boundary of the reachable set has one solution") {
    auto sols = inverse_kinematics(arm, Pose2{3.0, 0.0, 0.0});
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].max_diff({{0, 0, 0}}) < 1e-9);
  }
  SUBCASE("beyond total reach is empty") {
    CHECK(inverse_kinematics(arm, Pose2{4.0, 0.0, 0.0}).empty());
  }
  SUBCASE("two elbow branches") {
    auto sols = inverse_kinematics(arm, Pose2{2.0, 0.0, 0.0});
    REQUIRE(sols.size() == 2);
    // Wrist at (1,0): law of cosines gives theta2 = +-2pi/3.
    double t2a = std::abs(sols[0].angles[1]);
    double t2b = std::abs(sols[1].angles[1]);
    CHECK(t2a == doctest::Approx(2.0 * M_PI / 3).epsilon(1e-9));
    CHECK(t2b == doctest::Approx(2.0 * M_PI / 3).epsilon(1e-9));
    CHECK(sols[0].angles[1] * sols[1].angles[1] < 0.0);
  }
}

TEST_CASE("FK-IK round trip on 1000 random reachable targets") {
  ArmModel arm = unit_arm();
  arm.base = Pose2{0.4, -0.2, 0.3};
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    JointConfig q{{rng.uniform(-2.9, 2.9), rng.uniform(-2.9, 2.9), rng.uniform(-2.9, 2.9)}};
    Pose2 target = forward_kinematics(arm, q);
    auto sols = inverse_kinematics(arm, target);
    REQUIRE(!sols.empty());
    for (const JointConfig& s : sols) {
      CHECK(arm.within_limits(s));
      Pose2 reached = forward_kinematics(arm, s);
      CHECK(std::hypot(reached.x - target.x, reached.y - target.y) < 1e-9);
      CHECK(std::abs(normalize_angle(reached.theta - target.theta)) < 1e-9);
    }
  }
}

TEST_CASE("arm_shape") {
  ArmModel arm = unit_arm();
  SUBCASE("degenerate dimensions rejected") {
    ArmModel bad = arm;
    bad.link_widths = {0.0, 0.05, 0.05};
    CHECK_THROWS_AS(arm_shape(bad, {{0, 0, 0}}, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(GripperModel(0.0, 0.0, 0.1, 100.0, arm.gripper.palm_shape),
                    std::invalid_argument);
    CHECK_THROWS_AS(arm_shape(arm, {{0, 0, 0}}, arm.gripper.max_aperture + 0.01),
                    std::invalid_argument);
  }
  SUBCASE("extended arm bounding box") {
    Shape2 s = arm_shape(arm, {{0, 0, 0}}, 0.05);
    Aabb box = s.aabb();
    CHECK(box.lo.x == doctest::Approx(0.0));
    CHECK(box.hi.x == doctest::Approx(3.0 + arm.gripper.finger_length));
  }
  SUBCASE("aperture does not alter link rectangles") {
    Shape2 narrow = arm_shape(arm, {{0.4, -0.7, 0.2}}, 0.02);
    Shape2 wide = arm_shape(arm, {{0.4, -0.7, 0.2}}, 0.09);
    for (int part = 0; part < 3; ++part) {
      const auto& a = narrow.parts[part].vertices();
      const auto& b = wide.parts[part].vertices();
      REQUIRE(a.size() == b.size());
      for (std::size_t v = 0; v < a.size(); ++v) {
        CHECK(a[v].x == doctest::Approx(b[v].x));
        CHECK(a[v].y == doctest::Approx(b[v].y));
      }
    }
  }
}

TEST_CASE("plan_cartesian") {
  ArmModel arm = unit_arm();
  CartesianParams params;
  params.aperture = 0.05;
  ManifoldId m = ManifoldId::regrasp(0);

  SUBCASE("zero-length goal returns a single waypoint") {
    JointConfig start{{0.3, 0.5, -0.2}};
    auto traj = plan_cartesian(arm, start, forward_kinematics(arm, start), {}, std::nullopt,
                               params, m);
    REQUIRE(traj.has_value());
    CHECK(traj->waypoints.size() == 1);
    CHECK(traj->waypoints[0].max_diff(start) == 0.0);
  }

  SUBCASE("segment that exits the reachable annulus is rejected") {
    // Elbow nearly locked straight: the wrist stays close to radius 2, so the
    // chord between two far targets dips inside the unreachable hole.
    ArmModel locked = arm;
    locked.joint_limits[1] = {-0.5, 0.5};
    JointConfig start{{0, 0, 0}};
    auto traj = plan_cartesian(locked, start, Pose2{0.0, 3.0, M_PI / 2}, {}, std::nullopt,
                               params, m);
    CHECK(!traj.has_value());
  }

  SUBCASE("vertical lift stays on the straight segment") {
    auto starts = inverse_kinematics(arm, Pose2{1.5, 0.5, 0.0});
    REQUIRE(!starts.empty());
    auto traj =
        plan_cartesian(arm, starts[0], Pose2{1.5, 0.7, 0.0}, {}, std::nullopt, params, m);
    REQUIRE(traj.has_value());
    for (const JointConfig& q : traj->waypoints) {
      Pose2 p = forward_kinematics(arm, q);
      CHECK(std::abs(p.x - 1.5) < 1e-6);
      CHECK(p.y > 0.5 - 1e-6);
      CHECK(p.y < 0.7 + 1e-6);
      CHECK(std::abs(p.theta) < 1e-6);
    }
    Pose2 end = forward_kinematics(arm, traj->waypoints.back());
    CHECK(end.y == doctest::Approx(0.7).epsilon(1e-9));
  }

  SUBCASE("consecutive waypoints respect the continuity bound") {
    auto starts = inverse_kinematics(arm, Pose2{1.2, -0.4, 0.3});
    REQUIRE(!starts.empty());
    auto traj =
        plan_cartesian(arm, starts[0], Pose2{1.8, 0.6, -0.4}, {}, std::nullopt, params, m);
    REQUIRE(traj.has_value());
    for (std::size_t i = 1; i < traj->waypoints.size(); ++i)
      CHECK(traj->waypoints[i].max_diff(traj->waypoints[i - 1]) <= params.branch_bound);
  }

  SUBCASE("reversed trajectory is the reversed motion") {
    auto starts = inverse_kinematics(arm, Pose2{1.5, 0.5, 0.0});
    REQUIRE(!starts.empty());
    auto traj =
        plan_cartesian(arm, starts[0], Pose2{1.5, 0.7, 0.0}, {}, std::nullopt, params, m);
    REQUIRE(traj.has_value());
    Trajectory rev = traj->reversed();
    REQUIRE(rev.waypoints.size() == traj->waypoints.size());
    CHECK(rev.waypoints.front().max_diff(traj->waypoints.back()) == 0.0);
    CHECK(rev.waypoints.back().max_diff(traj->waypoints.front()) == 0.0);
    for (std::size_t i = 1; i < rev.waypoints.size(); ++i)
      CHECK(rev.waypoints[i].max_diff(rev.waypoints[i - 1]) <= params.branch_bound);
  }

  SUBCASE("collision with an obstacle rejects the plan") {
    std::vector<Obstacle> obstacles;
    obstacles.push_back(
        {Shape2({ConvexPolygon::rectangle(1.5, 0.9, 0.4, 0.4)}, 1.0), Pose2::identity()});
    auto starts = inverse_kinematics(arm, Pose2{1.5, 0.5, 0.0});
    REQUIRE(!starts.empty());
    auto traj =
        plan_cartesian(arm, starts[0], Pose2{1.5, 1.1, 0.0}, obstacles, std::nullopt, params, m);
    CHECK(!traj.has_value());
  }
}
