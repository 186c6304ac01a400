#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "scene_io.hpp"
#include "test_scenes.hpp"

using namespace slideplan;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return SLIDEPLAN_CLI_PATH; }

int run(const std::string& args) {
  std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("slideplan_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("CLI exit codes and outputs") {
  TempDir tmp;
  fs::path scene_path = tmp.path / "scene.json";
  std::ofstream(scene_path) << scene_to_json(test_scenes::desk_scene());

  SUBCASE("plan writes a file and exits 0 on success") {
    fs::path plan_path = tmp.path / "plan.json";
    CHECK(run("plan " + scene_path.string() + " --out " + plan_path.string()) == 0);
    REQUIRE(fs::exists(plan_path));
    CHECK(slurp(plan_path).find("\"status\": \"solved\"") != std::string::npos);

    SUBCASE("identical seeds give byte-identical plan files") {
      fs::path again = tmp.path / "plan2.json";
      CHECK(run("plan " + scene_path.string() + " --out " + again.string()) == 0);
      CHECK(slurp(plan_path) == slurp(again));
    }

    SUBCASE("eval prints a stability record") {
      CHECK(run("eval " + scene_path.string() + " " + plan_path.string()) == 0);
    }

    SUBCASE("render refuses a plan for another scene") {
      fs::path other_scene = tmp.path / "other.json";
      std::ofstream(other_scene) << scene_to_json(test_scenes::hard_desk_scene());
      CHECK(run("eval " + other_scene.string() + " " + plan_path.string()) == 1);
    }

    SUBCASE("render writes frames") {
      fs::path frames = tmp.path / "frames";
      CHECK(run("render " + scene_path.string() + " " + plan_path.string() + " --out " +
                frames.string() + " --stride 20") == 0);
      CHECK(fs::exists(frames / "frame_0000.svg"));
    }
  }

  SUBCASE("malformed scenes exit 1 with a diagnostic") {
    fs::path bad = tmp.path / "bad.json";
    std::ofstream(bad) << "{\"version\": 1, \"surprise\": true}";
    CHECK(run("plan " + bad.string()) == 1);
  }

  SUBCASE("missing files exit 1") { CHECK(run("plan /nonexistent/scene.json") == 1); }

  SUBCASE("unsolvable scenes exit 2 and record the status") {
    Scene unreachable = test_scenes::desk_scene();
    unreachable.start_placement = Pose2{0.88, 0.0, 0.0};
    unreachable.goal_placement = Pose2{0.85, 0.0, 0.0};
    fs::path path = tmp.path / "unreachable.json";
    std::ofstream(path) << scene_to_json(unreachable);
    fs::path plan_path = tmp.path / "plan.json";
    CHECK(run("plan " + path.string() + " --out " + plan_path.string()) == 2);
    CHECK(slurp(plan_path).find("no_viable_policy") != std::string::npos);
  }

  SUBCASE("seed override changes the plan seed deterministically") {
    fs::path a = tmp.path / "a.json";
    fs::path b = tmp.path / "b.json";
    CHECK(run("plan " + scene_path.string() + " --seed-override 9 --out " + a.string()) == 0);
    CHECK(run("plan " + scene_path.string() + " --seed-override 9 --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
  }

  SUBCASE("bench CSV is byte-identical across consecutive runs") {
    fs::path a = tmp.path / "bench_a.csv";
    fs::path b = tmp.path / "bench_b.csv";
    CHECK(run("bench --suite-seed 42 --out " + a.string()) == 0);
    CHECK(run("bench --suite-seed 42 --out " + b.string()) == 0);
    std::string text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text.rfind("scene,planner,status,", 0) == 0);
  }
}
