#include "bench.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

#include "planner.hpp"

namespace slideplan {

namespace {

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

struct Row {
  int scene;
  std::string planner;
  std::string status;
  double stability = 0.0;
  double delta_r = 0.0;
  int episodes = 0;
  double wall_ms = 0.0;
  long validated_edges = 0;
  long value_sweeps = 0;
};

Row run_one(const Scene& scene, int scene_id, const std::string& planner, bool with_timing) {
  Row row;
  row.scene = scene_id;
  row.planner = planner;
  try {
    PlanResult result = planner == "baseline"      ? plan_baseline(scene)
                        : planner == "dijkstra-task" ? plan_dijkstra(scene)
                                                     : plan(scene);
    row.status = to_string(result.status);
    row.episodes = result.episodes;
    row.wall_ms = with_timing ? result.metrics.wall_ms : 0.0;
    row.validated_edges = result.metrics.validated_edges;
    row.value_sweeps = result.metrics.value_sweeps;
    if (result.status == PlanStatus::Solved) {
      StabilityReport report = execute(scene, result, {}, 1);
      row.stability = report.stability;
      row.delta_r = report.delta_r;
    }
  } catch (const std::exception&) {
    row.status = "error";  // recorded, never aborts the suite
  }
  return row;
}

}  // namespace

std::string run_bench_csv(uint64_t suite_seed, bool with_timing) {
  std::vector<Scene> suite = generate_scene_suite(suite_seed);
  std::vector<Row> rows;
  for (std::size_t i = 0; i < suite.size(); ++i)
    for (const char* planner : {"baseline", "dijkstra-task", "multimodal"})
      rows.push_back(run_one(suite[i], static_cast<int>(i) + 1, planner, with_timing));

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.scene != b.scene ? a.scene < b.scene : a.planner < b.planner;
  });

  std::ostringstream csv;
  csv << "scene,planner,status,stability,delta_r,episodes,wall_ms,validated_edges,"
         "value_sweeps\n";
  for (const Row& r : rows) {
    csv << r.scene << ',' << r.planner << ',' << r.status << ',' << fmt(r.stability) << ','
        << fmt(r.delta_r) << ',' << r.episodes << ',' << fmt(r.wall_ms) << ','
        << r.validated_edges << ',' << r.value_sweeps << '\n';
  }
  return csv.str();
}

}  // namespace slideplan
