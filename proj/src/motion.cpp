#include "motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "rng.hpp"

namespace slideplan {

ManifoldConstraint ManifoldConstraint::regrasp(ManifoldId id) {
  ManifoldConstraint c;
  c.id = id;
  return c;
}

ManifoldConstraint ManifoldConstraint::slide(ManifoldId id, const Shape2& object,
                                             const Grasp& grasp, double table_height,
                                             double resting_theta) {
  ManifoldConstraint c;
  c.id = id;
  c.object = object;
  c.object_from_tool = inverse(grasp.object_frame_pose);
  c.table_height = table_height;
  c.resting_theta = resting_theta;
  return c;
}

ManifoldConstraint ManifoldConstraint::transfer(ManifoldId id, const Shape2& object,
                                                const Grasp& grasp, double table_height,
                                                double carry_theta, double min_clearance) {
  ManifoldConstraint c;
  c.id = id;
  c.object = object;
  c.object_from_tool = inverse(grasp.object_frame_pose);
  c.table_height = table_height;
  c.carry_theta = carry_theta;
  c.min_clearance = min_clearance;
  return c;
}

Pose2 ManifoldConstraint::object_pose(const ArmModel& arm, const JointConfig& q) const {
  return compose(forward_kinematics(arm, q), object_from_tool);
}

double residual(const ManifoldConstraint& constraint, const ArmModel& arm,
                const JointConfig& q) {
  switch (constraint.id.kind) {
    case ManifoldId::Kind::ReGrasp:
      return 0.0;
    case ManifoldId::Kind::Slide: {
      Pose2 obj = constraint.object_pose(arm, q);
      double bottom = obj.y + constraint.object->bottom_offset(obj.theta);
      return std::abs(bottom - constraint.table_height) +
             std::abs(normalize_angle(obj.theta - constraint.resting_theta));
    }
    case ManifoldId::Kind::Transfer: {
      Pose2 obj = constraint.object_pose(arm, q);
      double bottom = obj.y + constraint.object->bottom_offset(obj.theta);
      double clearance = bottom - constraint.table_height;
      return std::abs(normalize_angle(obj.theta - constraint.carry_theta)) +
             std::max(0.0, constraint.min_clearance - clearance);
    }
  }
  return 0.0;
}

std::optional<JointConfig> project(const ManifoldConstraint& constraint, const ArmModel& arm,
                                   const JointConfig& q) {
  if (constraint.id.kind == ManifoldId::Kind::ReGrasp) return q;

  Pose2 obj = constraint.object_pose(arm, q);
  Pose2 snapped;
  if (constraint.id.kind == ManifoldId::Kind::Slide) {
    snapped = Pose2{obj.x,
                    constraint.table_height -
                        constraint.object->bottom_offset(constraint.resting_theta),
                    constraint.resting_theta};
  } else {
    double bottom_off = constraint.object->bottom_offset(constraint.carry_theta);
    double y = obj.y;
    double clearance = (y + bottom_off) - constraint.table_height;
    if (clearance < constraint.min_clearance)
      y += constraint.min_clearance - clearance;
    snapped = Pose2{obj.x, y, constraint.carry_theta};
  }
  Pose2 tool_target = compose(snapped, inverse(constraint.object_from_tool));
  auto sols = inverse_kinematics(arm, tool_target);
  if (sols.empty()) return std::nullopt;
  const JointConfig* best = &sols[0];
  double best_d = sols[0].l2_diff(q);
  for (const JointConfig& s : sols) {
    double d = s.l2_diff(q);
    if (d < best_d) {
      best_d = d;
      best = &s;
    }
  }
  return *best;
}

Roadmap build_roadmap(const ManifoldConstraint& constraint, const ArmModel& arm,
                      const PlannerParams& params, int n_samples, int k, uint64_t seed) {
  Roadmap map;
  map.manifold = constraint.id;
  map.seed = seed;
  Rng rng(seed);
  const long budget = static_cast<long>(params.projection_retry_factor) * n_samples;
  for (long attempt = 0; attempt < budget && static_cast<int>(map.nodes.size()) < n_samples;
       ++attempt) {
    JointConfig q;
    for (int j = 0; j < 3; ++j)
      q.angles[j] = rng.uniform(arm.joint_limits[j][0], arm.joint_limits[j][1]);
    auto projected = project(constraint, arm, q);
    if (!projected) continue;
    if (residual(constraint, arm, *projected) >= params.projection_tol) continue;
    map.nodes.push_back(*projected);
  }
  if (map.nodes.empty()) throw RoadmapEmptyError();

  const int n = static_cast<int>(map.nodes.size());
  std::map<std::pair<int, int>, int> edge_index;
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> dists;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      dists.emplace_back(map.nodes[i].l2_diff(map.nodes[j]), j);
    }
    std::sort(dists.begin(), dists.end());
    int count = std::min<int>(k, static_cast<int>(dists.size()));
    for (int c = 0; c < count; ++c) {
      int j = dists[c].second;
      auto key = std::minmax(i, j);
      if (edge_index.count({key.first, key.second})) continue;
      RoadmapEdge e;
      e.a = key.first;
      e.b = key.second;
      e.length = dists[c].first;
      edge_index[{key.first, key.second}] = static_cast<int>(map.edges.size());
      map.edges.push_back(e);
    }
  }
  map.adjacency.assign(n, {});
  for (std::size_t e = 0; e < map.edges.size(); ++e) {
    map.adjacency[map.edges[e].a].push_back(static_cast<int>(e));
    map.adjacency[map.edges[e].b].push_back(static_cast<int>(e));
  }
  return map;
}

bool env_collides(const ArmModel& arm, const JointConfig& q, const CollisionEnv& env) {
  return config_in_collision(arm, q, env.obstacles, env.carried, env.aperture, env.margin);
}

namespace {

// Interpolate, project, and check one edge; fills the waypoint sequence.
bool validate_segment(const ManifoldConstraint& constraint, const ArmModel& arm,
                      const CollisionEnv& env, const JointConfig& a, const JointConfig& b,
                      const PlannerParams& params, std::vector<JointConfig>& waypoints) {
  waypoints.clear();
  const int steps = std::max(1, static_cast<int>(std::ceil(a.max_diff(b) / params.interp_step)));
  JointConfig prev;
  for (int i = 0; i <= steps; ++i) {
    double t = static_cast<double>(i) / steps;
    JointConfig raw;
    for (int j = 0; j < 3; ++j) raw.angles[j] = a.angles[j] + t * (b.angles[j] - a.angles[j]);
    JointConfig q;
    if (i == 0) {
      q = a;
    } else if (i == steps) {
      q = b;
    } else {
      auto projected = project(constraint, arm, raw);
      if (!projected) return false;
      q = *projected;
      if (residual(constraint, arm, q) >= params.projection_tol) return false;
      if (!arm.within_limits(q)) return false;
    }
    if (i > 0 && q.max_diff(prev) > params.branch_bound) return false;
    if (env_collides(arm, q, env)) return false;
    if (i == 0 || q.max_diff(prev) > 0.0) waypoints.push_back(q);
    prev = q;
  }
  return true;
}

struct TempEdge {
  int a;  // combined-graph node index
  int b;
  double length;
  EdgeValidity validity = EdgeValidity::Unknown;
};

}  // namespace

std::optional<Trajectory> lazy_query(Roadmap& roadmap, const ManifoldConstraint& constraint,
                                     const ArmModel& arm, const CollisionEnv& env,
                                     const JointConfig& start, const JointConfig& goal,
                                     int budget, const PlannerParams& params,
                                     QueryStats* stats) {
  if (residual(constraint, arm, start) >= params.projection_tol ||
      residual(constraint, arm, goal) >= params.projection_tol)
    throw std::invalid_argument("lazy_query: start or goal violates the manifold constraint");

  Trajectory result;
  result.manifold = constraint.id;
  if (start.max_diff(goal) < 1e-12) {
    if (env_collides(arm, start, env)) return std::nullopt;
    result.waypoints.push_back(start);
    return result;
  }

  const int n = static_cast<int>(roadmap.nodes.size());
  const int start_id = n;
  const int goal_id = n + 1;
  auto node_config = [&](int id) -> const JointConfig& {
    if (id == start_id) return start;
    if (id == goal_id) return goal;
    return roadmap.nodes[id];
  };

  // Temporary lazy connections for the query endpoints.
  std::vector<TempEdge> temp_edges;
  auto connect_endpoint = [&](int endpoint) {
    std::vector<std::pair<double, int>> dists;
    for (int j = 0; j < n; ++j)
      dists.emplace_back(node_config(endpoint).l2_diff(roadmap.nodes[j]), j);
    std::sort(dists.begin(), dists.end());
    int count = std::min<int>(params.roadmap_k, static_cast<int>(dists.size()));
    for (int c = 0; c < count; ++c)
      temp_edges.push_back({endpoint, dists[c].second, dists[c].first});
  };
  connect_endpoint(start_id);
  connect_endpoint(goal_id);
  temp_edges.push_back({start_id, goal_id, start.l2_diff(goal)});

  std::vector<std::vector<int>> temp_adj(n + 2);
  for (std::size_t e = 0; e < temp_edges.size(); ++e) {
    temp_adj[temp_edges[e].a].push_back(static_cast<int>(e));
    temp_adj[temp_edges[e].b].push_back(static_cast<int>(e));
  }

  // Waypoints computed while validating this query, keyed by (edge id, temp?).
  std::map<std::pair<bool, int>, std::vector<JointConfig>> segment_cache;
  int validated = 0;

  while (true) {
    // Shortest path over non-invalid edges.
    std::vector<double> dist(n + 2, std::numeric_limits<double>::infinity());
    std::vector<std::pair<bool, int>> via(n + 2, {false, -1});
    std::vector<int> via_node(n + 2, -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[start_id] = 0.0;
    queue.emplace(0.0, start_id);
    while (!queue.empty()) {
      auto [d, u] = queue.top();
      queue.pop();
      if (d > dist[u] + 1e-15) continue;
      auto relax = [&](bool is_temp, int eid, int other, double len, EdgeValidity validity) {
        if (validity == EdgeValidity::Invalid) return;
        double nd = d + len;
        if (nd < dist[other] - 1e-15) {
          dist[other] = nd;
          via[other] = {is_temp, eid};
          via_node[other] = u;
          queue.emplace(nd, other);
        }
      };
      if (u < n)
        for (int eid : roadmap.adjacency[u]) {
          const RoadmapEdge& e = roadmap.edges[eid];
          relax(false, eid, e.a == u ? e.b : e.a, e.length, e.validity);
        }
      for (int eid : temp_adj[u]) {
        const TempEdge& e = temp_edges[eid];
        relax(true, eid, e.a == u ? e.b : e.a, e.length, e.validity);
      }
    }
    if (dist[goal_id] == std::numeric_limits<double>::infinity()) {
      if (stats) stats->validated_edges = validated;
      return std::nullopt;
    }

    // Recover the candidate path as (node, via-edge) pairs from the start.
    std::vector<std::pair<int, std::pair<bool, int>>> path;
    for (int u = goal_id; u != start_id; u = via_node[u]) path.push_back({u, via[u]});
    std::reverse(path.begin(), path.end());

    // Validate unknown edges in path order; on the first invalid edge,
    // re-search.
    bool path_valid = true;
    int prev_node = start_id;
    for (const auto& [node, edge_ref] : path) {
      auto [is_temp, eid] = edge_ref;
      EdgeValidity& validity =
          is_temp ? temp_edges[eid].validity : roadmap.edges[eid].validity;
      if (validity == EdgeValidity::Unknown) {
        if (validated >= budget) {
          if (stats) stats->validated_edges = validated;
          return std::nullopt;
        }
        ++validated;
        if (!is_temp) ++roadmap.validations;
        int a = is_temp ? temp_edges[eid].a : roadmap.edges[eid].a;
        int b = is_temp ? temp_edges[eid].b : roadmap.edges[eid].b;
        std::vector<JointConfig> waypoints;
        bool ok = validate_segment(constraint, arm, env, node_config(a), node_config(b),
                                   params, waypoints);
        validity = ok ? EdgeValidity::Valid : EdgeValidity::Invalid;
        if (ok) segment_cache[{is_temp, eid}] = std::move(waypoints);
      }
      if (validity == EdgeValidity::Invalid) {
        path_valid = false;
        break;
      }
      prev_node = node;
    }
    if (!path_valid) continue;

    // Assemble the trajectory along the valid path.
    result.waypoints.clear();
    prev_node = start_id;
    result.waypoints.push_back(start);
    for (const auto& [node, edge_ref] : path) {
      auto [is_temp, eid] = edge_ref;
      auto it = segment_cache.find(edge_ref);
      std::vector<JointConfig> segment;
      if (it != segment_cache.end()) {
        segment = it->second;
      } else {
        // Validated in an earlier query; recompute deterministically.
        int a = is_temp ? temp_edges[eid].a : roadmap.edges[eid].a;
        int b = is_temp ? temp_edges[eid].b : roadmap.edges[eid].b;
        validate_segment(constraint, arm, env, node_config(a), node_config(b), params, segment);
      }
      int a = is_temp ? temp_edges[eid].a : roadmap.edges[eid].a;
      if (a != prev_node) std::reverse(segment.begin(), segment.end());
      for (std::size_t w = 1; w < segment.size(); ++w) result.waypoints.push_back(segment[w]);
      prev_node = node;
    }
    if (stats) stats->validated_edges = validated;
    return result;
  }
}

}  // namespace slideplan
