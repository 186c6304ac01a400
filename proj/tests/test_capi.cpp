#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <slideplan/slideplan.h>

#include <string>

#include "scene_io.hpp"
#include "test_scenes.hpp"

using namespace slideplan;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  sp_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("C API round trip: parse, plan, serialize, evaluate, render") {
  std::string scene_json = scene_to_json(test_scenes::desk_scene());

  sp_scene* scene = nullptr;
  char* error = nullptr;
  REQUIRE(sp_scene_parse(scene_json.c_str(), &scene, &error) == SP_OK);

  char* canonical = nullptr;
  REQUIRE(sp_scene_canonical_json(scene, &canonical) == SP_OK);
  CHECK(take(canonical) == scene_json);

  sp_plan* plan = nullptr;
  REQUIRE(sp_plan_run(scene, "multimodal", -1, 0, &plan, &error) == SP_OK);
  CHECK(sp_plan_solved(plan) == 1);

  char* plan_json = nullptr;
  REQUIRE(sp_plan_to_json(plan, &plan_json) == SP_OK);
  std::string plan_text = take(plan_json);
  CHECK(!plan_text.empty());

  sp_plan* reloaded = nullptr;
  REQUIRE(sp_plan_parse(plan_text.c_str(), &reloaded, &error) == SP_OK);
  CHECK(sp_plan_solved(reloaded) == 1);

  char* report = nullptr;
  REQUIRE(sp_evaluate(scene, reloaded, 0.0, 0.0, 1, &report, &error) == SP_OK);
  std::string report_text = take(report);
  CHECK(report_text.find("\"success\":true") != std::string::npos);

  char** frames = nullptr;
  size_t count = 0;
  REQUIRE(sp_render_frames(scene, reloaded, 10, &frames, &count, &error) == SP_OK);
  CHECK(count > 0);
  CHECK(std::string(frames[0]).find("<svg") != std::string::npos);
  sp_frames_free(frames, count);

  sp_plan_free(reloaded);
  sp_plan_free(plan);
  sp_scene_free(scene);
}

TEST_CASE("C API error paths") {
  SUBCASE("parse errors carry diagnostics") {
    sp_scene* scene = nullptr;
    char* error = nullptr;
    CHECK(sp_scene_parse("{\"nope\": 1}", &scene, &error) == SP_ERR_PARSE);
    CHECK(scene == nullptr);
    std::string message = take(error);
    CHECK(message.find("nope") != std::string::npos);
  }

  SUBCASE("unknown planner is rejected") {
    std::string scene_json = scene_to_json(test_scenes::desk_scene());
    sp_scene* scene = nullptr;
    char* error = nullptr;
    REQUIRE(sp_scene_parse(scene_json.c_str(), &scene, &error) == SP_OK);
    sp_plan* plan = nullptr;
    CHECK(sp_plan_run(scene, "astar", -1, 0, &plan, &error) == SP_ERR_INVALID_ARGUMENT);
    take(error);
    sp_scene_free(scene);
  }

  SUBCASE("hash mismatch is rejected") {
    Scene a = test_scenes::desk_scene();
    Scene b = test_scenes::hard_desk_scene();
    std::string a_json = scene_to_json(a);
    std::string b_json = scene_to_json(b);
    sp_scene* scene_a = nullptr;
    sp_scene* scene_b = nullptr;
    char* error = nullptr;
    REQUIRE(sp_scene_parse(a_json.c_str(), &scene_a, &error) == SP_OK);
    REQUIRE(sp_scene_parse(b_json.c_str(), &scene_b, &error) == SP_OK);
    sp_plan* plan = nullptr;
    REQUIRE(sp_plan_run(scene_a, "multimodal", -1, 0, &plan, &error) == SP_OK);
    char* report = nullptr;
    CHECK(sp_evaluate(scene_b, plan, 0.0, 0.0, 1, &report, &error) == SP_ERR_HASH_MISMATCH);
    CHECK(report == nullptr);
    take(error);
    sp_plan_free(plan);
    sp_scene_free(scene_a);
    sp_scene_free(scene_b);
  }

  SUBCASE("planning failure is distinguishable and still serializable") {
    Scene unreachable = test_scenes::desk_scene();
    unreachable.start_placement = Pose2{0.88, 0.0, 0.0};
    unreachable.goal_placement = Pose2{0.85, 0.0, 0.0};
    std::string json = scene_to_json(unreachable);
    sp_scene* scene = nullptr;
    char* error = nullptr;
    REQUIRE(sp_scene_parse(json.c_str(), &scene, &error) == SP_OK);
    sp_plan* plan = nullptr;
    CHECK(sp_plan_run(scene, "multimodal", -1, 0, &plan, &error) == SP_ERR_PLANNING_FAILED);
    REQUIRE(plan != nullptr);
    CHECK(sp_plan_solved(plan) == 0);
    char* plan_json = nullptr;
    REQUIRE(sp_plan_to_json(plan, &plan_json) == SP_OK);
    CHECK(take(plan_json).find("no_viable_policy") != std::string::npos);
    sp_plan_free(plan);
    sp_scene_free(scene);
  }
}
