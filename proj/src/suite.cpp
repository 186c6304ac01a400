#include <cmath>

#include "planner.hpp"
#include "rng.hpp"

namespace slideplan {

namespace {

// All suite objects are authored resting, bottom at y = 0, with a pinchable
// feature near the COM (high quality reachable somewhere) and a narrow tab
// far from it (the low-quality grasp). Parts overlap their support bar by
// 2 mm so union boundaries stay well behaved.

// Bar with a tall heavy block at the right end and a low butt tab at the
// left end; the block pinch sits near the COM.
Shape2 mallet(double handle_len, double block_h, double density) {
  const double hl = handle_len / 2.0;
  return Shape2({ConvexPolygon::rectangle(0.0, 0.011, handle_len, 0.022),
                 ConvexPolygon::rectangle(hl - 0.035, 0.02 + block_h / 2.0, 0.07, block_h),
                 ConvexPolygon::rectangle(-hl + 0.014, 0.035, 0.028, 0.03)},
                density);
}

// Bar with a center tab (near-COM pinch) and a left-end tab.
Shape2 tab_bar(double bar_len, double density) {
  const double hl = bar_len / 2.0;
  return Shape2({ConvexPolygon::rectangle(0.0, 0.011, bar_len, 0.022),
                 ConvexPolygon::rectangle(0.0, 0.045, 0.03, 0.05),
                 ConvexPolygon::rectangle(-hl + 0.015, 0.04, 0.03, 0.04)},
                density);
}

// Horizontal leg with a tall column at the right end and a left butt tab.
Shape2 ell(double leg_len, double col_h, double density) {
  const double hl = leg_len / 2.0;
  return Shape2({ConvexPolygon::rectangle(0.0, 0.0125, leg_len, 0.025),
                 ConvexPolygon::rectangle(hl - 0.0225, 0.023 + col_h / 2.0, 0.045, col_h),
                 ConvexPolygon::rectangle(-hl + 0.013, 0.038, 0.026, 0.03)},
                density);
}

// Crossbar with a center column and a left-end tab.
Shape2 tee(double bar_len, double col_h, double density) {
  const double hl = bar_len / 2.0;
  return Shape2({ConvexPolygon::rectangle(0.0, 0.0125, bar_len, 0.025),
                 ConvexPolygon::rectangle(0.0, 0.023 + col_h / 2.0, 0.04, col_h),
                 ConvexPolygon::rectangle(-hl + 0.013, 0.038, 0.026, 0.03)},
                density);
}

Scene base_scene() {
  Scene scene;
  scene.table = Table{0.15, 1.05, 0.0, 0.04};
  scene.arm.base = Pose2{0.0, 0.35, 0.0};
  scene.arm.link_lengths = {0.30, 0.25, 0.15};
  scene.arm.link_widths = {0.04, 0.035, 0.03};
  scene.arm.joint_limits = {{{-2.9, 2.9}, {-2.9, 2.9}, {-2.9, 2.9}}};
  scene.arm.gripper = GripperModel::standard();
  scene.goal_placement = Pose2{0.32, 0.0, 0.0};
  scene.initial_config = JointConfig{{-0.6, 1.8, 0.4}};
  scene.params.placement_count = 14;
  scene.params.placement_min_separation = 0.03;
  return scene;
}

Obstacle table_box(double cx, double width, double height) {
  return {Shape2({ConvexPolygon::rectangle(0.0, height / 2.0, width, height)}, 1.0),
          Pose2{cx, 0.0, 0.0}};
}

// Box hugging the object's right end so every near-COM pinch collides.
Obstacle adjacent_box(const Scene& scene, double gap, double width, double height) {
  Aabb box = scene.target.aabb();
  double left_face = scene.start_placement.x + box.hi.x + gap;
  return table_box(left_face + width / 2.0, width, height);
}

}  // namespace

std::vector<Scene> generate_scene_suite(uint64_t seed) {
  std::vector<Scene> scenes;

  auto add = [&](Scene scene, int index) {
    scene.seed = derive_seed(seed, 100 + static_cast<uint64_t>(index));
    scenes.push_back(std::move(scene));
  };

  // Scenes 1-6: every high-quality grasp blocked at the start placement,
  // either out of range or crowded by an adjacent obstacle.
  {
    Scene s = base_scene();
    s.target = mallet(0.30, 0.14, 20.0);
    s.start_placement = Pose2{0.52, 0.0, 0.0};
    add(std::move(s), 0);
  }
  {
    Scene s = base_scene();
    s.target = mallet(0.30, 0.13, 21.0);
    s.start_placement = Pose2{0.42, 0.0, 0.0};
    s.obstacles.push_back(adjacent_box(s, 0.008, 0.05, 0.16));
    add(std::move(s), 1);
  }
  {
    Scene s = base_scene();
    s.target = ell(0.26, 0.16, 21.0);
    s.start_placement = Pose2{0.55, 0.0, 0.0};
    add(std::move(s), 2);
  }
  {
    Scene s = base_scene();
    s.target = ell(0.26, 0.15, 22.0);
    s.start_placement = Pose2{0.42, 0.0, 0.0};
    s.obstacles.push_back(adjacent_box(s, 0.008, 0.05, 0.17));
    add(std::move(s), 3);
  }
  {
    Scene s = base_scene();
    s.target = mallet(0.34, 0.12, 19.0);
    s.start_placement = Pose2{0.53, 0.0, 0.0};
    add(std::move(s), 4);
  }
  {
    Scene s = base_scene();
    s.target = tee(0.30, 0.12, 25.0);
    s.start_placement = Pose2{0.60, 0.0, 0.0};
    add(std::move(s), 5);
  }

  // Scenes 7-12: random collision-free placement with clutter on the far side.
  struct RandomSpec {
    int index;
    Shape2 shape;
    int boxes;
  };
  std::vector<RandomSpec> randoms;
  randoms.push_back({6, tab_bar(0.30, 32.0), 1});
  randoms.push_back({7, tab_bar(0.34, 30.0), 2});
  randoms.push_back({8, tab_bar(0.26, 34.0), 1});
  randoms.push_back({9, ell(0.24, 0.14, 23.0), 2});
  randoms.push_back({10, tee(0.28, 0.11, 26.0), 1});
  randoms.push_back({11, tee(0.32, 0.13, 24.0), 2});

  for (auto& spec : randoms) {
    Rng rng(derive_seed(seed, 500 + static_cast<uint64_t>(spec.index)));
    Scene s = base_scene();
    s.target = spec.shape;
    Aabb box = s.target.aabb();
    double lo = std::max(0.33, s.table.x0 - box.lo.x + 0.01);
    double start_x = rng.uniform(lo, 0.52);
    s.start_placement = Pose2{start_x, 0.0, 0.0};
    for (int b = 0; b < spec.boxes; ++b) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        double w = rng.uniform(0.05, 0.10);
        double h = rng.uniform(0.06, 0.18);
        double cx = rng.uniform(0.64, 0.92);
        Obstacle candidate = table_box(cx, w, h);
        bool clear = !shapes_intersect(s.target, s.start_placement, candidate.shape,
                                       candidate.pose, 0.02);
        for (const Obstacle& other : s.obstacles)
          if (shapes_intersect(other.shape, other.pose, candidate.shape, candidate.pose, 0.02))
            clear = false;
        if (clear) {
          s.obstacles.push_back(std::move(candidate));
          break;
        }
      }
    }
    add(std::move(s), spec.index);
  }

  return scenes;
}

}  // namespace slideplan
