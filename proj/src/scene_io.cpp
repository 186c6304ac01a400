#include "scene_io.hpp"

#include <cmath>
#include <json.hpp>
#include <set>

namespace slideplan {

namespace {

using Json = nlohmann::ordered_json;

void check_keys(const Json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw ParseError(path.empty() ? key : path + "." + key,
                                              "unknown field");
  }
}

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

double num(const Json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError(path, "expected a number");
  double d = value.get<double>();
  if (!std::isfinite(d)) throw ParseError(path, "number must be finite");
  return d;
}

double num_field(const Json& obj, const std::string& key, const std::string& path) {
  return num(field(obj, key, path), path + "." + key);
}

int int_field(const Json& obj, const std::string& key, const std::string& path) {
  double d = num_field(obj, key, path);
  if (d != std::floor(d)) throw ParseError(path + "." + key, "expected an integer");
  return static_cast<int>(d);
}

std::array<double, 3> triple(const Json& arr, const std::string& path) {
  if (!arr.is_array() || arr.size() != 3) throw ParseError(path, "expected an array of 3 numbers");
  return {num(arr[0], path + "[0]"), num(arr[1], path + "[1]"), num(arr[2], path + "[2]")};
}

Pose2 pose_from(const Json& arr, const std::string& path) {
  auto t = triple(arr, path);
  return Pose2{t[0], t[1], t[2]};
}

Json pose_to(const Pose2& p) { return Json::array({p.x, p.y, p.theta}); }

Vec2 vec_from(const Json& arr, const std::string& path) {
  if (!arr.is_array() || arr.size() != 2) throw ParseError(path, "expected an array of 2 numbers");
  return {num(arr[0], path + "[0]"), num(arr[1], path + "[1]")};
}

ConvexPolygon polygon_from(const Json& arr, const std::string& path) {
  if (!arr.is_array()) throw ParseError(path, "expected an array of vertices");
  std::vector<Vec2> vertices;
  for (std::size_t i = 0; i < arr.size(); ++i)
    vertices.push_back(vec_from(arr[i], path + "[" + std::to_string(i) + "]"));
  try {
    return ConvexPolygon(std::move(vertices));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, e.what());
  }
}

Shape2 shape_from(const Json& obj, const std::string& path) {
  check_keys(obj, path, {"parts", "density"});
  const Json& parts = field(obj, "parts", path);
  if (!parts.is_array() || parts.empty())
    throw ParseError(path + ".parts", "expected a non-empty array");
  std::vector<ConvexPolygon> polys;
  for (std::size_t i = 0; i < parts.size(); ++i)
    polys.push_back(polygon_from(parts[i], path + ".parts[" + std::to_string(i) + "]"));
  double density = num_field(obj, "density", path);
  try {
    return Shape2(std::move(polys), density);
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, e.what());
  }
}

Json shape_to(const Shape2& shape) {
  Json parts = Json::array();
  for (const auto& poly : shape.parts) {
    Json verts = Json::array();
    for (const Vec2& v : poly.vertices()) verts.push_back(Json::array({v.x, v.y}));
    parts.push_back(verts);
  }
  return Json{{"parts", parts}, {"density", shape.density}};
}

struct ParamField {
  const char* name;
  double PlannerParams::* dvalue = nullptr;
  int PlannerParams::* ivalue = nullptr;
};

const std::vector<ParamField>& param_fields() {
  static const std::vector<ParamField> fields = {
      {"cone_half_angle", &PlannerParams::cone_half_angle},
      {"grasp_spacing", &PlannerParams::grasp_spacing},
      {"torsional_mu", &PlannerParams::torsional_mu},
      {"patch_radius", &PlannerParams::patch_radius},
      {"torque_threshold_factor", &PlannerParams::torque_threshold_factor},
      {"com_noise_sigma", &PlannerParams::com_noise_sigma},
      {"placement_count", nullptr, &PlannerParams::placement_count},
      {"placement_clearance", &PlannerParams::placement_clearance},
      {"placement_min_separation", &PlannerParams::placement_min_separation},
      {"pregrasp_offset", &PlannerParams::pregrasp_offset},
      {"lift_height", &PlannerParams::lift_height},
      {"cart_step_pos", &PlannerParams::cart_step_pos},
      {"cart_step_ang", &PlannerParams::cart_step_ang},
      {"branch_bound", &PlannerParams::branch_bound},
      {"collision_margin", &PlannerParams::collision_margin},
      {"grasp_pad_clearance", &PlannerParams::grasp_pad_clearance},
      {"roadmap_samples", nullptr, &PlannerParams::roadmap_samples},
      {"roadmap_k", nullptr, &PlannerParams::roadmap_k},
      {"projection_tol", &PlannerParams::projection_tol},
      {"projection_retry_factor", nullptr, &PlannerParams::projection_retry_factor},
      {"validation_budget", nullptr, &PlannerParams::validation_budget},
      {"interp_step", &PlannerParams::interp_step},
      {"transfer_clearance", &PlannerParams::transfer_clearance},
      {"gamma", &PlannerParams::gamma},
      {"r_target", &PlannerParams::r_target},
      {"r_step", &PlannerParams::r_step},
      {"r_failure", &PlannerParams::r_failure},
      {"vi_tol", &PlannerParams::vi_tol},
      {"vi_max_iters", nullptr, &PlannerParams::vi_max_iters},
      {"decay", &PlannerParams::decay},
      {"decay_similar", &PlannerParams::decay_similar},
      {"episode_budget", nullptr, &PlannerParams::episode_budget},
      {"stability_epsilon", &PlannerParams::stability_epsilon},
  };
  return fields;
}

PlannerParams params_from(const Json& obj, const std::string& path) {
  PlannerParams params;
  std::set<std::string> allowed;
  for (const ParamField& f : param_fields()) allowed.insert(f.name);
  check_keys(obj, path, allowed);
  for (const ParamField& f : param_fields()) {
    if (!obj.contains(f.name)) continue;
    if (f.dvalue)
      params.*(f.dvalue) = num_field(obj, f.name, path);
    else
      params.*(f.ivalue) = int_field(obj, f.name, path);
  }
  return params;
}

Json params_to(const PlannerParams& params) {
  Json obj = Json::object();
  for (const ParamField& f : param_fields()) {
    if (f.dvalue)
      obj[f.name] = params.*(f.dvalue);
    else
      obj[f.name] = params.*(f.ivalue);
  }
  return obj;
}

GripperModel gripper_from(const Json& obj, const std::string& path) {
  check_keys(obj, path,
             {"finger_length", "finger_thickness", "max_aperture", "grip_force", "palm"});
  try {
    return GripperModel(num_field(obj, "finger_length", path),
                        num_field(obj, "finger_thickness", path),
                        num_field(obj, "max_aperture", path),
                        num_field(obj, "grip_force", path),
                        shape_from(field(obj, "palm", path), path + ".palm"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, e.what());
  }
}

ArmModel arm_from(const Json& obj, const std::string& path, JointConfig& initial_config) {
  check_keys(obj, path,
             {"base", "link_lengths", "link_widths", "joint_limits", "initial_config",
              "gripper"});
  ArmModel arm;
  arm.base = pose_from(field(obj, "base", path), path + ".base");
  arm.link_lengths = triple(field(obj, "link_lengths", path), path + ".link_lengths");
  arm.link_widths = triple(field(obj, "link_widths", path), path + ".link_widths");
  const Json& limits = field(obj, "joint_limits", path);
  if (!limits.is_array() || limits.size() != 3)
    throw ParseError(path + ".joint_limits", "expected 3 [min, max] pairs");
  for (int i = 0; i < 3; ++i) {
    const Json& pair = limits[i];
    std::string ppath = path + ".joint_limits[" + std::to_string(i) + "]";
    if (!pair.is_array() || pair.size() != 2) throw ParseError(ppath, "expected [min, max]");
    arm.joint_limits[i] = {num(pair[0], ppath + "[0]"), num(pair[1], ppath + "[1]")};
    if (arm.joint_limits[i][0] > arm.joint_limits[i][1])
      throw ParseError(ppath, "limits out of order");
  }
  for (double l : arm.link_lengths)
    if (l <= 0.0) throw ParseError(path + ".link_lengths", "lengths must be positive");
  initial_config.angles = triple(field(obj, "initial_config", path), path + ".initial_config");
  arm.gripper = gripper_from(field(obj, "gripper", path), path + ".gripper");
  return arm;
}

}  // namespace

Scene scene_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  check_keys(doc, "",
             {"version", "seed", "table", "arm", "obstacles", "target", "start_placement",
              "goal_placement", "params"});
  int version = int_field(doc, "version", "");
  if (version != 1) throw ParseError("version", "unsupported version");

  Scene scene;
  const Json& seed = field(doc, "seed", "");
  if (!seed.is_number_integer() && !seed.is_number_unsigned())
    throw ParseError("seed", "expected an integer");
  scene.seed = seed.get<uint64_t>();

  const Json& table = field(doc, "table", "");
  check_keys(table, "table", {"x0", "x1", "height", "thickness"});
  scene.table.x0 = num_field(table, "x0", "table");
  scene.table.x1 = num_field(table, "x1", "table");
  scene.table.height = num_field(table, "height", "table");
  scene.table.thickness = num_field(table, "thickness", "table");
  if (scene.table.x1 <= scene.table.x0) throw ParseError("table", "x1 must exceed x0");
  if (scene.table.thickness <= 0.0) throw ParseError("table.thickness", "must be positive");

  scene.arm = arm_from(field(doc, "arm", ""), "arm", scene.initial_config);

  const Json& obstacles = field(doc, "obstacles", "");
  if (!obstacles.is_array()) throw ParseError("obstacles", "expected an array");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    std::string opath = "obstacles[" + std::to_string(i) + "]";
    check_keys(obstacles[i], opath, {"shape", "pose"});
    Obstacle obs{shape_from(field(obstacles[i], "shape", opath), opath + ".shape"),
                 pose_from(field(obstacles[i], "pose", opath), opath + ".pose")};
    scene.obstacles.push_back(std::move(obs));
  }

  scene.target = shape_from(field(doc, "target", ""), "target");
  scene.start_placement = pose_from(field(doc, "start_placement", ""), "start_placement");
  scene.goal_placement = pose_from(field(doc, "goal_placement", ""), "goal_placement");
  if (doc.contains("params")) scene.params = params_from(doc["params"], "params");

  // Scene invariants.
  auto check_placement = [&](const Pose2& p, const std::string& name) {
    if (std::abs(p.y - scene.rest_y(p.theta)) > 1e-6)
      throw ParseError(name, "placement must rest on the table line");
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i)
      if (shapes_intersect(scene.target, p, scene.obstacles[i].shape, scene.obstacles[i].pose))
        throw ParseError(name, "placement collides with obstacles[" + std::to_string(i) + "]");
  };
  check_placement(scene.start_placement, "start_placement");
  check_placement(scene.goal_placement, "goal_placement");
  return scene;
}

std::string scene_to_json(const Scene& scene) {
  Json doc;
  doc["version"] = 1;
  doc["seed"] = scene.seed;
  doc["table"] = Json{{"x0", scene.table.x0},
                      {"x1", scene.table.x1},
                      {"height", scene.table.height},
                      {"thickness", scene.table.thickness}};
  Json limits = Json::array();
  for (int i = 0; i < 3; ++i)
    limits.push_back(Json::array({scene.arm.joint_limits[i][0], scene.arm.joint_limits[i][1]}));
  doc["arm"] = Json{
      {"base", pose_to(scene.arm.base)},
      {"link_lengths", Json::array({scene.arm.link_lengths[0], scene.arm.link_lengths[1],
                                    scene.arm.link_lengths[2]})},
      {"link_widths", Json::array({scene.arm.link_widths[0], scene.arm.link_widths[1],
                                   scene.arm.link_widths[2]})},
      {"joint_limits", limits},
      {"initial_config",
       Json::array({scene.initial_config.angles[0], scene.initial_config.angles[1],
                    scene.initial_config.angles[2]})},
      {"gripper", Json{{"finger_length", scene.arm.gripper.finger_length},
                       {"finger_thickness", scene.arm.gripper.finger_thickness},
                       {"max_aperture", scene.arm.gripper.max_aperture},
                       {"grip_force", scene.arm.gripper.grip_force},
                       {"palm", shape_to(scene.arm.gripper.palm_shape)}}}};
  Json obstacles = Json::array();
  for (const Obstacle& obs : scene.obstacles)
    obstacles.push_back(Json{{"shape", shape_to(obs.shape)}, {"pose", pose_to(obs.pose)}});
  doc["obstacles"] = obstacles;
  doc["target"] = shape_to(scene.target);
  doc["start_placement"] = pose_to(scene.start_placement);
  doc["goal_placement"] = pose_to(scene.goal_placement);
  doc["params"] = params_to(scene.params);
  return doc.dump(2) + "\n";
}

std::string scene_hash(const Scene& scene) {
  std::string canonical = scene_to_json(scene);
  uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

namespace {

const char* manifold_kind_key(ManifoldId::Kind kind) { return manifold_kind_name(kind); }

ManifoldId::Kind manifold_kind_from(const std::string& name, const std::string& path) {
  if (name == "regrasp") return ManifoldId::Kind::ReGrasp;
  if (name == "slide") return ManifoldId::Kind::Slide;
  if (name == "transfer") return ManifoldId::Kind::Transfer;
  throw ParseError(path, "unknown manifold kind");
}

PlanStatus status_from(const std::string& name, const std::string& path) {
  if (name == "solved") return PlanStatus::Solved;
  if (name == "no_viable_policy") return PlanStatus::NoViablePolicy;
  if (name == "budget_exhausted") return PlanStatus::BudgetExhausted;
  if (name == "no_high_quality_grasp") return PlanStatus::NoHighQualityGrasp;
  throw ParseError(path, "unknown status");
}

SegmentKind segment_kind_from(const std::string& name, const std::string& path) {
  if (name == "regrasp_move") return SegmentKind::RegraspMove;
  if (name == "approach") return SegmentKind::Approach;
  if (name == "release") return SegmentKind::Release;
  if (name == "lift") return SegmentKind::Lift;
  if (name == "slide_move") return SegmentKind::SlideMove;
  if (name == "transfer_move") return SegmentKind::TransferMove;
  throw ParseError(path, "unknown segment kind");
}

Json waypoints_to(const std::vector<JointConfig>& waypoints) {
  Json arr = Json::array();
  for (const JointConfig& q : waypoints)
    arr.push_back(Json::array({q.angles[0], q.angles[1], q.angles[2]}));
  return arr;
}

std::vector<JointConfig> waypoints_from(const Json& arr, const std::string& path) {
  if (!arr.is_array() || arr.empty()) throw ParseError(path, "expected a non-empty array");
  std::vector<JointConfig> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(JointConfig{triple(arr[i], path + "[" + std::to_string(i) + "]")});
  return out;
}

}  // namespace

std::string plan_to_json(const PlanResult& result, const std::string& scene_hash,
                         bool with_timing) {
  Json doc;
  doc["version"] = 1;
  doc["scene_hash"] = scene_hash;
  doc["planner"] = result.planner_name;
  doc["status"] = to_string(result.status);
  doc["episodes"] = result.episodes;
  doc["final_grasp"] = result.final_grasp;
  doc["final_grasp_torque"] = result.final_grasp_torque;

  Json grasps = Json::array();
  for (const Grasp& g : result.grasps) {
    grasps.push_back(Json{{"id", g.id},
                          {"pose", pose_to(g.object_frame_pose)},
                          {"contact_a", Json::array({g.contact_a.x, g.contact_a.y})},
                          {"contact_b", Json::array({g.contact_b.x, g.contact_b.y})},
                          {"width", g.width},
                          {"pinch_normal", Json::array({g.pinch_normal.x, g.pinch_normal.y})}});
  }
  doc["grasps"] = grasps;

  Json segments = Json::array();
  for (const PlanSegment& seg : result.segments) {
    segments.push_back(Json{{"manifold", Json{{"kind", manifold_kind_key(seg.manifold.kind)},
                                              {"co_param", seg.manifold.co_param}}},
                            {"kind", to_string(seg.kind)},
                            {"grasp", seg.grasp},
                            {"placement", seg.placement},
                            {"waypoints", waypoints_to(seg.waypoints)}});
  }
  doc["segments"] = segments;

  Json log = Json::array();
  for (const EpisodeLog& e : result.episode_log) {
    Json updates = Json::array();
    for (const auto& [action, value] : e.updates)
      updates.push_back(Json::array({action, value}));
    log.push_back(Json{{"episode", e.episode},
                       {"score", e.score},
                       {"chosen_path", e.chosen_path},
                       {"failed_action", e.failed_action},
                       {"updates", updates}});
  }
  doc["episode_log"] = log;

  doc["metrics"] = Json{{"wall_ms", with_timing ? result.metrics.wall_ms : 0.0},
                        {"validated_edges", result.metrics.validated_edges},
                        {"value_sweeps", result.metrics.value_sweeps}};
  return doc.dump(2) + "\n";
}

LoadedPlan plan_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  check_keys(doc, "",
             {"version", "scene_hash", "planner", "status", "episodes", "final_grasp",
              "final_grasp_torque", "grasps", "segments", "episode_log", "metrics"});
  if (int_field(doc, "version", "") != 1) throw ParseError("version", "unsupported version");

  LoadedPlan loaded;
  if (!field(doc, "scene_hash", "").is_string())
    throw ParseError("scene_hash", "expected a string");
  loaded.scene_hash = doc["scene_hash"].get<std::string>();
  PlanResult& result = loaded.result;
  if (!field(doc, "planner", "").is_string()) throw ParseError("planner", "expected a string");
  result.planner_name = doc["planner"].get<std::string>();
  result.status = status_from(field(doc, "status", "").get<std::string>(), "status");
  result.episodes = int_field(doc, "episodes", "");
  result.final_grasp = int_field(doc, "final_grasp", "");
  result.final_grasp_torque = num_field(doc, "final_grasp_torque", "");

  const Json& grasps = field(doc, "grasps", "");
  if (!grasps.is_array()) throw ParseError("grasps", "expected an array");
  for (std::size_t i = 0; i < grasps.size(); ++i) {
    std::string gpath = "grasps[" + std::to_string(i) + "]";
    check_keys(grasps[i], gpath, {"id", "pose", "contact_a", "contact_b", "width",
                                  "pinch_normal"});
    Grasp g;
    g.id = int_field(grasps[i], "id", gpath);
    g.object_frame_pose = pose_from(field(grasps[i], "pose", gpath), gpath + ".pose");
    g.contact_a = vec_from(field(grasps[i], "contact_a", gpath), gpath + ".contact_a");
    g.contact_b = vec_from(field(grasps[i], "contact_b", gpath), gpath + ".contact_b");
    g.width = num_field(grasps[i], "width", gpath);
    g.pinch_normal = vec_from(field(grasps[i], "pinch_normal", gpath), gpath + ".pinch_normal");
    result.grasps.push_back(g);
  }

  const Json& segments = field(doc, "segments", "");
  if (!segments.is_array()) throw ParseError("segments", "expected an array");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    std::string spath = "segments[" + std::to_string(i) + "]";
    check_keys(segments[i], spath, {"manifold", "kind", "grasp", "placement", "waypoints"});
    const Json& manifold = field(segments[i], "manifold", spath);
    check_keys(manifold, spath + ".manifold", {"kind", "co_param"});
    PlanSegment seg;
    seg.manifold.kind = manifold_kind_from(
        field(manifold, "kind", spath + ".manifold").get<std::string>(),
        spath + ".manifold.kind");
    seg.manifold.co_param = int_field(manifold, "co_param", spath + ".manifold");
    seg.kind =
        segment_kind_from(field(segments[i], "kind", spath).get<std::string>(), spath + ".kind");
    seg.grasp = int_field(segments[i], "grasp", spath);
    seg.placement = int_field(segments[i], "placement", spath);
    seg.waypoints = waypoints_from(field(segments[i], "waypoints", spath), spath + ".waypoints");
    result.segments.push_back(std::move(seg));
  }

  const Json& log = field(doc, "episode_log", "");
  if (!log.is_array()) throw ParseError("episode_log", "expected an array");
  for (std::size_t i = 0; i < log.size(); ++i) {
    std::string epath = "episode_log[" + std::to_string(i) + "]";
    check_keys(log[i], epath, {"episode", "score", "chosen_path", "failed_action", "updates"});
    EpisodeLog e;
    e.episode = int_field(log[i], "episode", epath);
    e.score = num_field(log[i], "score", epath);
    for (const auto& a : field(log[i], "chosen_path", epath))
      e.chosen_path.push_back(a.get<int>());
    e.failed_action = int_field(log[i], "failed_action", epath);
    for (const auto& u : field(log[i], "updates", epath))
      e.updates.emplace_back(u[0].get<int>(), u[1].get<double>());
    result.episode_log.push_back(std::move(e));
  }

  const Json& metrics = field(doc, "metrics", "");
  check_keys(metrics, "metrics", {"wall_ms", "validated_edges", "value_sweeps"});
  result.metrics.wall_ms = num_field(metrics, "wall_ms", "metrics");
  result.metrics.validated_edges =
      static_cast<long>(num_field(metrics, "validated_edges", "metrics"));
  result.metrics.value_sweeps = static_cast<long>(num_field(metrics, "value_sweeps", "metrics"));
  return loaded;
}

std::string report_to_json(const StabilityReport& report) {
  Json doc;
  doc["delta_r"] = report.delta_r;
  doc["stability"] = report.stability;
  doc["success"] = report.success;
  return doc.dump() + "\n";
}

}  // namespace slideplan
