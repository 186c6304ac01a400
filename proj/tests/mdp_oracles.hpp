#pragma once

// Test-side MDP oracles: independent policy evaluation and exhaustive policy
// enumeration, plus a bounded random MDP generator in the planner's shape
// (each action succeeds toward one successor or drops to the failure state).

#include <limits>
#include <vector>

#include "mdp.hpp"
#include "rng.hpp"

namespace mdp_oracles {

using namespace slideplan;

inline MdpModel skeleton(int regular, int targets) {
  MdpModel m;
  MdpState init;
  init.role = StateRole::Initial;
  m.initial_state = m.add_state(init);
  MdpState fail;
  fail.role = StateRole::Failure;
  m.failure_state = m.add_state(fail);
  for (int i = 0; i < regular; ++i) m.add_state(MdpState{});
  for (int i = 0; i < targets; ++i) {
    MdpState t;
    t.role = StateRole::Target;
    m.add_state(t);
  }
  return m;
}

inline int link(MdpModel& m, int from, int to, double rho) {
  MdpAction a;
  a.from = from;
  a.to = to;
  a.rho = rho;
  return m.add_action(a);
}

inline double evaluate_policy(const MdpModel& mdp, const std::vector<int>& policy,
                              const RewardConfig& r) {
  std::vector<double> v(mdp.states.size(), 0.0);
  for (int iter = 0; iter < 4000; ++iter) {
    double residual = 0.0;
    for (std::size_t s = 0; s < mdp.states.size(); ++s) {
      if (mdp.is_terminal(static_cast<int>(s))) continue;
      double nv;
      int aid = policy[s];
      if (aid < 0) {
        nv = r.r_failure;
      } else {
        const MdpAction& a = mdp.actions[aid];
        double entry = mdp.states[a.to].role == StateRole::Target ? r.r_target : r.r_step;
        nv = a.rho * (entry + r.gamma * v[a.to]) + (1.0 - a.rho) * r.r_failure;
      }
      residual = std::max(residual, std::abs(nv - v[s]));
      v[s] = nv;
    }
    if (residual < 1e-13) break;
  }
  return v[mdp.initial_state];
}

inline double brute_force_optimal_return(const MdpModel& mdp, const RewardConfig& r) {
  std::vector<std::vector<int>> choices(mdp.states.size());
  for (std::size_t s = 0; s < mdp.states.size(); ++s) {
    if (mdp.is_terminal(static_cast<int>(s)) || mdp.outgoing[s].empty())
      choices[s] = {-1};
    else
      choices[s] = mdp.outgoing[s];
  }
  std::vector<int> policy(mdp.states.size(), -1);
  double best = -std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, std::size_t s) -> void {
    if (s == mdp.states.size()) {
      best = std::max(best, evaluate_policy(mdp, policy, r));
      return;
    }
    for (int c : choices[s]) {
      policy[s] = c;
      self(self, s + 1);
    }
  };
  recurse(recurse, 0);
  return best;
}

// At most 20 states; branching capped so policy enumeration stays tractable.
inline MdpModel random_mdp(Rng& rng) {
  int regular = rng.uniform_int(2, 14);
  int targets = rng.uniform_int(1, 3);
  MdpModel m = skeleton(regular, targets);
  int branchy = 0;
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    if (m.is_terminal(static_cast<int>(s)) || static_cast<int>(s) == m.failure_state) continue;
    int n_actions = (branchy < 7 && rng.uniform01() < 0.5) ? 2 : 1;
    if (n_actions == 2) ++branchy;
    for (int a = 0; a < n_actions; ++a) {
      int to = 2 + rng.uniform_int(0, regular + targets - 1);
      link(m, static_cast<int>(s), to, rng.uniform(0.05, 1.0));
    }
  }
  m.finalize();
  return m;
}

}  // namespace mdp_oracles
