#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "foliation.hpp"

namespace slideplan {

struct NoTargetStateError : std::runtime_error {
  NoTargetStateError()
      : std::runtime_error("goal placement unreachable with any high-quality grasp") {}
};

struct NoViablePolicyError : std::runtime_error {
  NoViablePolicyError() : std::runtime_error("no viable policy from the initial state") {}
};

enum class StateRole { Regular, Initial, Target, Failure };

// MDP states are transition endpoints (plus the initial, target, and failure
// sentinels); equal arm configurations from different transitions stay
// distinct states.
struct MdpState {
  int id = -1;
  JointConfig config;
  std::optional<ManifoldId> manifold;  // absent only for the failure sentinel
  StateRole role = StateRole::Regular;
  int transition = -1;       // transition this endpoint belongs to, if any
  bool is_endpoint_start = false;
};

// Similarity key for failure propagation: same manifold kind and same
// co-parameter movement, regardless of which grasp (Slide) or placement
// (ReGrasp) the action uses.
struct ActionSignature {
  ManifoldId::Kind kind = ManifoldId::Kind::ReGrasp;
  int from_tag = -1;
  int to_tag = -1;

  auto operator<=>(const ActionSignature&) const = default;
};

constexpr int kInitTag = -1;
constexpr int kGoalTag = -2;

enum class ActionKind { IntraManifold, InterManifold };

struct MdpAction {
  int id = -1;
  int from = -1;
  int to = -1;
  double rho = 0.5;
  ActionKind kind = ActionKind::IntraManifold;
  ManifoldId manifold;
  int transition = -1;  // backing transition for inter-manifold actions
  std::optional<Trajectory> solution;
  ActionSignature signature;
};

struct MdpModel {
  std::vector<MdpState> states;
  std::vector<MdpAction> actions;
  std::vector<std::vector<int>> outgoing;
  int initial_state = -1;
  int failure_state = -1;
  std::vector<int> target_states;

  int add_state(MdpState s);
  int add_action(MdpAction a);
  void finalize();  // rebuilds the outgoing lists
  bool is_terminal(int state) const {
    return states[state].role == StateRole::Target || states[state].role == StateRole::Failure;
  }
};

struct RewardConfig {
  double r_target = 100.0;
  double r_step = -1.0;
  double r_failure = -100.0;
  double gamma = 0.95;

  void validate() const;
};

struct ValueTable {
  std::vector<double> value;
  std::vector<int> best_action;  // -1: only the virtual action to failure
  int sweeps = 0;
};

struct Task {
  int action_id = -1;
  JointConfig start;
  JointConfig end;
  ManifoldId manifold;
};

// Greedy walk through the policy; tasks are the intra-manifold actions, the
// action_path additionally interleaves the pre-solved transitions.
struct TaskSequence {
  std::vector<Task> tasks;
  std::vector<int> action_path;
};

// States are the transition endpoints plus initial/targets/failure; actions
// follow the per-manifold connection rules. Throws NoTargetStateError when no
// collision-free goal configuration exists for any high-quality grasp.
MdpModel build_mdp(const FoliationModel& model, const Scene& scene);

// Synchronous value iteration. Terminal states stay at value 0; states
// without outgoing actions back up through a virtual action straight to the
// failure state. Argmax ties break toward the lowest action id.
ValueTable value_iterate(const MdpModel& mdp, const RewardConfig& rewards, double tol,
                         int max_iters);

// Throws NoViablePolicyError when the initial value is failure-dominated, the
// walk dead-ends, or it revisits a state.
TaskSequence extract_task_sequence(const MdpModel& mdp, const ValueTable& values,
                                   const RewardConfig& rewards);

// rho <- 1.0 and the trajectory becomes the action's cached solution
// (the first cached trajectory is kept on repeated reports).
void report_success(MdpModel& mdp, int action_id, const Trajectory& traj);

// Decays the failed action and every same-signature action without a cached
// solution. Returns the applied (action, new rho) updates. Throws
// std::logic_error when the action already has a solution.
std::vector<std::pair<int, double>> report_failure(MdpModel& mdp, int action_id, double decay,
                                                   double decay_similar);

// Mode-transition-graph planner over the same states and actions: Dijkstra on
// edge weights (all 1.0 initially), +0.1 on every solved edge, +10 on every
// failed edge.
class DijkstraTaskPlanner {
 public:
  explicit DijkstraTaskPlanner(MdpModel* mdp);

  TaskSequence plan() const;  // throws NoViablePolicyError
  void report_success(int action_id, const Trajectory& traj);
  void report_failure(int action_id);

  double weight(int action_id) const { return weights_[action_id]; }
  const std::optional<Trajectory>& solution(int action_id) const {
    return solutions_[action_id];
  }

 private:
  MdpModel* mdp_;
  std::vector<double> weights_;
  std::vector<std::optional<Trajectory>> solutions_;
};

}  // namespace slideplan
