#include "mdp.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

namespace slideplan {

int MdpModel::add_state(MdpState s) {
  s.id = static_cast<int>(states.size());
  states.push_back(std::move(s));
  return states.back().id;
}

int MdpModel::add_action(MdpAction a) {
  a.id = static_cast<int>(actions.size());
  actions.push_back(std::move(a));
  return actions.back().id;
}

void MdpModel::finalize() {
  outgoing.assign(states.size(), {});
  for (const MdpAction& a : actions) outgoing[a.from].push_back(a.id);
  target_states.clear();
  for (const MdpState& s : states)
    if (s.role == StateRole::Target) target_states.push_back(s.id);
}

void RewardConfig::validate() const {
  if (!(r_failure < r_step && r_step < 0.0 && 0.0 < r_target))
    throw std::invalid_argument("RewardConfig: need r_failure < r_step < 0 < r_target");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("RewardConfig: gamma must be in (0,1)");
}

namespace {

std::pair<ManifoldId, ManifoldId> bridge_pair(const TransitionSample& t) {
  return t.from < t.to ? std::make_pair(t.from, t.to) : std::make_pair(t.to, t.from);
}

}  // namespace

MdpModel build_mdp(const FoliationModel& model, const Scene& scene) {
  MdpModel mdp;

  MdpState initial;
  initial.config = scene.initial_config;
  initial.manifold = ManifoldId::regrasp(0);
  initial.role = StateRole::Initial;
  mdp.initial_state = mdp.add_state(initial);

  MdpState failure;
  failure.role = StateRole::Failure;
  mdp.failure_state = mdp.add_state(failure);

  // Transition endpoints become states.
  std::vector<int> start_state(model.transitions.size(), -1);
  std::vector<int> end_state(model.transitions.size(), -1);
  for (const TransitionSample& t : model.transitions) {
    MdpState s;
    s.config = t.start_config();
    s.manifold = t.from;
    s.transition = t.id;
    s.is_endpoint_start = true;
    start_state[t.id] = mdp.add_state(s);

    MdpState e;
    e.config = t.end_config;
    e.manifold = t.to;
    e.transition = t.id;
    e.is_endpoint_start = false;
    end_state[t.id] = mdp.add_state(e);
  }

  // Target states: configurations holding the object lift_height above the
  // goal placement with a high-quality grasp.
  const std::vector<Obstacle> statics = scene.static_obstacles();
  const Pose2 goal_hover{scene.goal_placement.x,
                         scene.rest_y(scene.goal_placement.theta) + scene.params.lift_height,
                         scene.goal_placement.theta};
  std::map<int, std::vector<int>> targets_by_grasp;
  for (const ManifoldId& m : model.manifolds) {
    if (m.kind != ManifoldId::Kind::Transfer) continue;
    const Grasp& grasp = model.grasp(m.co_param);
    Pose2 tool = compose(goal_hover, grasp.object_frame_pose);
    double aperture =
        grasp_aperture(scene.arm.gripper, grasp.width, scene.params.grasp_pad_clearance);
    CarriedObject carried{scene.target, inverse(grasp.object_frame_pose)};
    for (const JointConfig& q : inverse_kinematics(scene.arm, tool)) {
      if (config_in_collision(scene.arm, q, statics, carried, aperture,
                              scene.params.collision_margin))
        continue;
      MdpState s;
      s.config = q;
      s.manifold = m;
      s.role = StateRole::Target;
      targets_by_grasp[m.co_param].push_back(mdp.add_state(s));
    }
  }
  bool any_target = false;
  for (const auto& [g, list] : targets_by_grasp) any_target |= !list.empty();
  if (!any_target) throw NoTargetStateError();

  // Inter-manifold actions carry their sampled trajectory and rho = 1.
  for (const TransitionSample& t : model.transitions) {
    MdpAction a;
    a.from = start_state[t.id];
    a.to = end_state[t.id];
    a.rho = 1.0;
    a.kind = ActionKind::InterManifold;
    a.manifold = t.from;
    a.transition = t.id;
    a.solution = t.trajectory;
    a.signature = {t.from.kind, t.placement, t.grasp};
    mdp.add_action(a);
  }

  auto add_intra = [&](int from, int to, ManifoldId manifold, ActionSignature sig) {
    MdpAction a;
    a.from = from;
    a.to = to;
    a.rho = 0.5;
    a.kind = ActionKind::IntraManifold;
    a.manifold = manifold;
    a.signature = sig;
    mdp.add_action(a);
  };

  // Initial state connects to the outgoing states of ReGrasp(p_start).
  for (const TransitionSample& t : model.transitions) {
    if (t.from == ManifoldId::regrasp(0))
      add_intra(mdp.initial_state, start_state[t.id], t.from,
                {ManifoldId::Kind::ReGrasp, kInitTag, t.grasp});
  }

  for (const ManifoldId& m : model.manifolds) {
    if (m.kind == ManifoldId::Kind::Slide) {
      for (const TransitionSample& in : model.transitions) {
        if (!(in.to == m)) continue;
        for (const TransitionSample& out : model.transitions) {
          if (!(out.from == m)) continue;
          // No action between endpoints bridging the same pair of manifolds.
          if (bridge_pair(in) == bridge_pair(out)) continue;
          add_intra(end_state[in.id], start_state[out.id], m,
                    {ManifoldId::Kind::Slide, in.placement, out.placement});
        }
      }
    } else if (m.kind == ManifoldId::Kind::ReGrasp) {
      for (const TransitionSample& in : model.transitions) {
        if (!(in.to == m)) continue;
        for (const TransitionSample& out : model.transitions) {
          if (!(out.from == m)) continue;
          // Re-grasping requires actually changing the arm configuration.
          if (in.end_config.max_diff(out.start_config()) < 1e-12) continue;
          add_intra(end_state[in.id], start_state[out.id], m,
                    {ManifoldId::Kind::ReGrasp, in.grasp, out.grasp});
        }
      }
    } else {
      for (const TransitionSample& in : model.transitions) {
        if (!(in.to == m)) continue;
        for (int target : targets_by_grasp[m.co_param])
          add_intra(end_state[in.id], target, m,
                    {ManifoldId::Kind::Transfer, in.placement, kGoalTag});
      }
    }
  }

  mdp.finalize();
  return mdp;
}

ValueTable value_iterate(const MdpModel& mdp, const RewardConfig& rewards, double tol,
                         int max_iters) {
  rewards.validate();
  const std::size_t n = mdp.states.size();
  ValueTable table;
  table.value.assign(n, 0.0);
  table.best_action.assign(n, -1);

  std::vector<double> next(n, 0.0);
  for (int sweep = 1; sweep <= max_iters; ++sweep) {
    double residual = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (mdp.is_terminal(static_cast<int>(s))) continue;
      double best_val;
      int best_a = -1;
      if (mdp.outgoing[s].empty()) {
        best_val = rewards.r_failure;  // virtual action straight to failure
      } else {
        best_val = -std::numeric_limits<double>::infinity();
        for (int aid : mdp.outgoing[s]) {
          const MdpAction& a = mdp.actions[aid];
          double entry = mdp.states[a.to].role == StateRole::Target ? rewards.r_target
                                                                    : rewards.r_step;
          double val = a.rho * (entry + rewards.gamma * table.value[a.to]) +
                       (1.0 - a.rho) * rewards.r_failure;
          if (val > best_val) {
            best_val = val;
            best_a = aid;
          }
        }
      }
      next[s] = best_val;
      table.best_action[s] = best_a;
      residual = std::max(residual, std::abs(best_val - table.value[s]));
    }
    for (std::size_t s = 0; s < n; ++s)
      if (!mdp.is_terminal(static_cast<int>(s))) table.value[s] = next[s];
    table.sweeps = sweep;
    if (residual < tol) break;
  }
  return table;
}

TaskSequence extract_task_sequence(const MdpModel& mdp, const ValueTable& values,
                                   const RewardConfig& rewards) {
  if (values.value[mdp.initial_state] <= rewards.r_failure * (1.0 - 1e-9))
    throw NoViablePolicyError();

  TaskSequence seq;
  std::set<int> visited;
  int state = mdp.initial_state;
  while (mdp.states[state].role != StateRole::Target) {
    if (!visited.insert(state).second) throw NoViablePolicyError();
    int aid = values.best_action[state];
    if (aid < 0) throw NoViablePolicyError();
    const MdpAction& a = mdp.actions[aid];
    seq.action_path.push_back(aid);
    if (a.kind == ActionKind::IntraManifold) {
      Task t;
      t.action_id = aid;
      t.start = mdp.states[a.from].config;
      t.end = mdp.states[a.to].config;
      t.manifold = a.manifold;
      seq.tasks.push_back(t);
    }
    state = a.to;
  }
  return seq;
}

void report_success(MdpModel& mdp, int action_id, const Trajectory& traj) {
  MdpAction& a = mdp.actions.at(action_id);
  a.rho = 1.0;
  if (!a.solution) a.solution = traj;
}

std::vector<std::pair<int, double>> report_failure(MdpModel& mdp, int action_id, double decay,
                                                   double decay_similar) {
  MdpAction& failed = mdp.actions.at(action_id);
  if (failed.solution)
    throw std::logic_error("report_failure: action already has a cached solution");
  std::vector<std::pair<int, double>> updates;
  failed.rho *= decay;
  updates.emplace_back(failed.id, failed.rho);
  for (MdpAction& a : mdp.actions) {
    if (a.id == action_id || a.solution || a.kind != ActionKind::IntraManifold) continue;
    if (a.signature == failed.signature) {
      a.rho *= decay_similar;
      updates.emplace_back(a.id, a.rho);
    }
  }
  return updates;
}

DijkstraTaskPlanner::DijkstraTaskPlanner(MdpModel* mdp)
    : mdp_(mdp),
      weights_(mdp->actions.size(), 1.0),
      solutions_(mdp->actions.size()) {
  for (const MdpAction& a : mdp_->actions)
    if (a.kind == ActionKind::InterManifold && a.solution) solutions_[a.id] = a.solution;
}

TaskSequence DijkstraTaskPlanner::plan() const {
  const std::size_t n = mdp_->states.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> via_action(n, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[mdp_->initial_state] = 0.0;
  queue.emplace(0.0, mdp_->initial_state);
  while (!queue.empty()) {
    auto [d, s] = queue.top();
    queue.pop();
    if (d > dist[s] + 1e-15) continue;
    for (int aid : mdp_->outgoing[s]) {
      const MdpAction& a = mdp_->actions[aid];
      double nd = d + weights_[aid];
      if (nd < dist[a.to] - 1e-15) {
        dist[a.to] = nd;
        via_action[a.to] = aid;
        queue.emplace(nd, a.to);
      }
    }
  }

  int best_target = -1;
  for (int t : mdp_->target_states)
    if (dist[t] < std::numeric_limits<double>::infinity() &&
        (best_target < 0 || dist[t] < dist[best_target]))
      best_target = t;
  if (best_target < 0) throw NoViablePolicyError();

  std::vector<int> path;
  for (int s = best_target; s != mdp_->initial_state;) {
    int aid = via_action[s];
    path.push_back(aid);
    s = mdp_->actions[aid].from;
  }
  std::reverse(path.begin(), path.end());

  TaskSequence seq;
  seq.action_path = path;
  for (int aid : path) {
    const MdpAction& a = mdp_->actions[aid];
    if (a.kind != ActionKind::IntraManifold) continue;
    Task t;
    t.action_id = aid;
    t.start = mdp_->states[a.from].config;
    t.end = mdp_->states[a.to].config;
    t.manifold = a.manifold;
    seq.tasks.push_back(t);
  }
  return seq;
}

void DijkstraTaskPlanner::report_success(int action_id, const Trajectory& traj) {
  weights_[action_id] += 0.1;
  if (!solutions_[action_id]) solutions_[action_id] = traj;
}

void DijkstraTaskPlanner::report_failure(int action_id) { weights_[action_id] += 10.0; }

}  // namespace slideplan
