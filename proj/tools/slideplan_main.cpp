// Command-line front end over the slideplan C API.
//
// Exit codes: 0 success, 1 input or I/O error, 2 planner-reported failure.

#include <slideplan/slideplan.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool write_file_atomic(const std::string& path, const std::string& content) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    if (!out.good()) return false;
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  return !ec;
}

struct ErrorString {
  char* value = nullptr;
  ~ErrorString() { sp_string_free(value); }
  std::string text() const { return value ? value : "unknown error"; }
};

struct SceneHandle {
  sp_scene* scene = nullptr;
  ~SceneHandle() { sp_scene_free(scene); }
};

struct PlanHandle {
  sp_plan* plan = nullptr;
  ~PlanHandle() { sp_plan_free(plan); }
};

int load_scene(const std::string& path, SceneHandle& handle) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read scene file: " << path << "\n";
    return 1;
  }
  ErrorString err;
  if (sp_scene_parse(text->c_str(), &handle.scene, &err.value) != SP_OK) {
    std::cerr << "error: " << path << ": " << err.text() << "\n";
    return 1;
  }
  return 0;
}

int load_plan(const std::string& path, PlanHandle& handle) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read plan file: " << path << "\n";
    return 1;
  }
  ErrorString err;
  if (sp_plan_parse(text->c_str(), &handle.plan, &err.value) != SP_OK) {
    std::cerr << "error: " << path << ": " << err.text() << "\n";
    return 1;
  }
  return 0;
}

int cmd_plan(const std::string& scene_path, const std::string& planner,
             const std::string& out_path, long long seed_override, bool timing) {
  SceneHandle scene;
  if (int rc = load_scene(scene_path, scene)) return rc;

  PlanHandle plan;
  ErrorString err;
  sp_status status = sp_plan_run(scene.scene, planner.c_str(), seed_override, timing ? 1 : 0,
                                 &plan.plan, &err.value);
  if (status != SP_OK && status != SP_ERR_PLANNING_FAILED) {
    std::cerr << "error: " << err.text() << "\n";
    return 1;
  }

  char* json = nullptr;
  if (sp_plan_to_json(plan.plan, &json) != SP_OK) {
    std::cerr << "error: failed to serialize the plan\n";
    return 1;
  }
  std::string text(json);
  sp_string_free(json);
  if (out_path.empty()) {
    std::cout << text;
  } else if (!write_file_atomic(out_path, text)) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  if (status == SP_ERR_PLANNING_FAILED) {
    std::cerr << "planning failed (status recorded in the plan output)\n";
    return 2;
  }
  return 0;
}

int cmd_eval(const std::string& scene_path, const std::string& plan_path,
             const std::string& noise, unsigned long long seed) {
  SceneHandle scene;
  if (int rc = load_scene(scene_path, scene)) return rc;
  PlanHandle plan;
  if (int rc = load_plan(plan_path, plan)) return rc;

  double sigma_xy = 0.0, sigma_theta = 0.0;
  if (!noise.empty() &&
      std::sscanf(noise.c_str(), "%lf,%lf", &sigma_xy, &sigma_theta) != 2) {
    std::cerr << "error: --noise expects sigma_xy,sigma_theta\n";
    return 1;
  }

  char* report = nullptr;
  ErrorString err;
  sp_status status = sp_evaluate(scene.scene, plan.plan, sigma_xy, sigma_theta, seed, &report,
                                 &err.value);
  if (status != SP_OK) {
    std::cerr << "error: " << err.text() << "\n";
    return 1;
  }
  std::cout << report;
  sp_string_free(report);
  return 0;
}

int cmd_bench(unsigned long long suite_seed, const std::string& out_path, bool timing) {
  char* csv = nullptr;
  ErrorString err;
  if (sp_bench_csv(suite_seed, timing ? 1 : 0, &csv, &err.value) != SP_OK) {
    std::cerr << "error: " << err.text() << "\n";
    return 1;
  }
  std::string text(csv);
  sp_string_free(csv);
  if (out_path.empty()) {
    std::cout << text;
  } else if (!write_file_atomic(out_path, text)) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  return 0;
}

int cmd_render(const std::string& scene_path, const std::string& plan_path,
               const std::string& out_dir, int stride) {
  SceneHandle scene;
  if (int rc = load_scene(scene_path, scene)) return rc;
  PlanHandle plan;
  if (int rc = load_plan(plan_path, plan)) return rc;
  if (!sp_plan_solved(plan.plan)) {
    std::cerr << "error: refusing to render an unsolved plan\n";
    return 1;
  }

  char** frames = nullptr;
  size_t count = 0;
  ErrorString err;
  if (sp_render_frames(scene.scene, plan.plan, stride, &frames, &count, &err.value) != SP_OK) {
    std::cerr << "error: " << err.text() << "\n";
    return 1;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  int rc = 0;
  for (size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04zu.svg", i);
    if (!write_file_atomic((fs::path(out_dir) / name).string(), frames[i])) {
      std::cerr << "error: cannot write frame " << i << "\n";
      rc = 1;
      break;
    }
  }
  std::cout << count << " frames written to " << out_dir << "\n";
  sp_frames_free(frames, count);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slideplan: planar slide-and-regrasp task-and-motion planner"};
  app.require_subcommand(1);

  std::string scene_path, plan_path, out_path, planner = "multimodal", noise;
  long long seed_override = -1;
  unsigned long long seed = 1, suite_seed = 42;
  int stride = 5;
  bool timing = false;

  auto* plan_cmd = app.add_subcommand("plan", "Plan a pick-and-place task for a scene");
  plan_cmd->add_option("scene", scene_path, "Scene JSON file")->required();
  plan_cmd->add_option("--planner", planner, "multimodal | baseline | dijkstra-task")
      ->check(CLI::IsMember({"multimodal", "baseline", "dijkstra-task"}));
  plan_cmd->add_option("--out", out_path, "Plan output file (default: stdout)");
  plan_cmd->add_option("--seed-override", seed_override, "Replace the scene's seed");
  plan_cmd->add_flag("--timing", timing, "Embed wall-clock times (non-reproducible bytes)");

  auto* eval_cmd = app.add_subcommand("eval", "Execute a plan and report grasp stability");
  eval_cmd->add_option("scene", scene_path, "Scene JSON file")->required();
  eval_cmd->add_option("plan", plan_path, "Plan JSON file")->required();
  eval_cmd->add_option("--noise", noise, "In-hand pose noise: sigma_xy,sigma_theta");
  eval_cmd->add_option("--seed", seed, "Noise seed");

  auto* bench_cmd = app.add_subcommand("bench", "Run the 12-scene benchmark suite");
  bench_cmd->add_option("--suite-seed", suite_seed, "Suite generation seed");
  bench_cmd->add_option("--out", out_path, "CSV output file (default: stdout)");
  bench_cmd->add_flag("--timing", timing, "Fill the wall_ms column");

  auto* render_cmd = app.add_subcommand("render", "Render a solved plan as SVG frames");
  render_cmd->add_option("scene", scene_path, "Scene JSON file")->required();
  render_cmd->add_option("plan", plan_path, "Plan JSON file")->required();
  render_cmd->add_option("--out", out_path, "Output directory")->required();
  render_cmd->add_option("--stride", stride, "Waypoints per frame")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (plan_cmd->parsed()) return cmd_plan(scene_path, planner, out_path, seed_override, timing);
  if (eval_cmd->parsed()) return cmd_eval(scene_path, plan_path, noise, seed);
  if (bench_cmd->parsed()) return cmd_bench(suite_seed, out_path, timing);
  if (render_cmd->parsed()) return cmd_render(scene_path, plan_path, out_path, stride);
  return 1;
}
