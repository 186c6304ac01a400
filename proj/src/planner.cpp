#include "planner.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "rng.hpp"

namespace slideplan {

const char* to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::Solved: return "solved";
    case PlanStatus::NoViablePolicy: return "no_viable_policy";
    case PlanStatus::BudgetExhausted: return "budget_exhausted";
    case PlanStatus::NoHighQualityGrasp: return "no_high_quality_grasp";
  }
  return "?";
}

const char* to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::RegraspMove: return "regrasp_move";
    case SegmentKind::Approach: return "approach";
    case SegmentKind::Release: return "release";
    case SegmentKind::Lift: return "lift";
    case SegmentKind::SlideMove: return "slide_move";
    case SegmentKind::TransferMove: return "transfer_move";
  }
  return "?";
}

namespace {

struct PlanningContext {
  const Scene& scene;
  std::vector<Obstacle> statics;
  ComEstimate com;
  std::vector<std::pair<Grasp, GraspQuality>> classified;  // ascending torque
  std::map<ManifoldId, Roadmap> roadmaps;
  long validated_edges = 0;
  long value_sweeps = 0;

  explicit PlanningContext(const Scene& s) : scene(s), statics(s.static_obstacles()) {
    auto grasps = sample_grasps(s.target, s.arm.gripper, s.params.cone_half_angle,
                                s.params.grasp_spacing);
    com = estimate_com(s.target, s.params.com_noise_sigma, derive_seed(s.seed, 101));
    classified = classify(grasps, com, torque_threshold(), s.start_placement.theta);
    for (std::size_t i = 0; i < classified.size(); ++i)
      classified[i].first.id = static_cast<int>(i);
  }

  double torque_threshold() const {
    return scene.params.torsional_mu * scene.arm.gripper.grip_force *
           scene.params.patch_radius * scene.params.torque_threshold_factor;
  }

  const Grasp& grasp(int id) const { return classified.at(id).first; }

  double aperture_for(const Grasp& g) const {
    return grasp_aperture(scene.arm.gripper, g.width, scene.params.grasp_pad_clearance);
  }

  Pose2 goal_hover() const {
    return Pose2{scene.goal_placement.x,
                 scene.rest_y(scene.goal_placement.theta) + scene.params.lift_height,
                 scene.goal_placement.theta};
  }

  ManifoldConstraint constraint_for(ManifoldId m) const {
    switch (m.kind) {
      case ManifoldId::Kind::ReGrasp: return ManifoldConstraint::regrasp(m);
      case ManifoldId::Kind::Slide:
        return ManifoldConstraint::slide(m, scene.target, grasp(m.co_param),
                                         scene.table.height, scene.start_placement.theta);
      case ManifoldId::Kind::Transfer:
      default:
        return ManifoldConstraint::transfer(m, scene.target, grasp(m.co_param),
                                            scene.table.height, scene.start_placement.theta,
                                            scene.params.transfer_clearance);
    }
  }

  CollisionEnv env_for(ManifoldId m, const std::vector<Pose2>& placements) const {
    CollisionEnv env;
    env.margin = scene.params.collision_margin;
    if (m.kind == ManifoldId::Kind::ReGrasp) {
      env.obstacles = statics;
      env.obstacles.push_back({scene.target, placements.at(m.co_param)});
      env.aperture = scene.arm.gripper.max_aperture;
    } else {
      env.obstacles = statics;
      const Grasp& g = grasp(m.co_param);
      env.carried = CarriedObject{scene.target, inverse(g.object_frame_pose)};
      env.aperture = aperture_for(g);
    }
    return env;
  }

  Roadmap& roadmap_for(ManifoldId m) {
    auto it = roadmaps.find(m);
    if (it != roadmaps.end()) return it->second;
    uint64_t seed = derive_seed(scene.seed,
                                1000 + static_cast<uint64_t>(m.kind) * 4096 +
                                    static_cast<uint64_t>(m.co_param + 2));
    Roadmap map = build_roadmap(constraint_for(m), scene.arm, scene.params,
                                scene.params.roadmap_samples, scene.params.roadmap_k, seed);
    return roadmaps.emplace(m, std::move(map)).first->second;
  }

  std::optional<Trajectory> solve_task(ManifoldId m, const JointConfig& start,
                                       const JointConfig& goal,
                                       const std::vector<Pose2>& placements) {
    Roadmap& map = roadmap_for(m);
    QueryStats stats;
    auto traj = lazy_query(map, constraint_for(m), scene.arm, env_for(m, placements), start,
                           goal, scene.params.validation_budget, scene.params, &stats);
    validated_edges += stats.validated_edges;
    return traj;
  }

  CartesianParams cart_params(double aperture) const {
    CartesianParams p;
    p.step_pos = scene.params.cart_step_pos;
    p.step_ang = scene.params.cart_step_ang;
    p.branch_bound = scene.params.branch_bound;
    p.margin = scene.params.collision_margin;
    p.aperture = aperture;
    return p;
  }
};

struct DirectPlan {
  std::vector<PlanSegment> segments;
};

PlanSegment make_segment(ManifoldId m, SegmentKind kind, int grasp, int placement,
                         std::vector<JointConfig> waypoints) {
  PlanSegment seg;
  seg.manifold = m;
  seg.kind = kind;
  seg.grasp = grasp;
  seg.placement = placement;
  seg.waypoints = std::move(waypoints);
  return seg;
}

// approach + lift + transfer straight from the start placement.
std::optional<DirectPlan> try_direct(PlanningContext& ctx, int grasp_id) {
  const Scene& scene = ctx.scene;
  const Grasp& g = ctx.grasp(grasp_id);
  const Pose2 grip_world = compose(scene.start_placement, g.object_frame_pose);
  const Pose2 pregrasp = compose(grip_world, Pose2{-scene.params.pregrasp_offset, 0.0, 0.0});
  std::vector<Obstacle> with_object = ctx.statics;
  with_object.push_back({scene.target, scene.start_placement});
  const std::vector<Pose2> start_only{scene.start_placement};

  CartesianParams cart = ctx.cart_params(ctx.aperture_for(g));
  CarriedObject carried{scene.target, inverse(g.object_frame_pose)};

  for (const JointConfig& q_grasp : inverse_kinematics(scene.arm, grip_world)) {
    auto release = plan_cartesian(scene.arm, q_grasp, pregrasp, with_object, std::nullopt, cart,
                                  ManifoldId::regrasp(0));
    if (!release) continue;
    Trajectory approach = release->reversed();

    auto move = ctx.solve_task(ManifoldId::regrasp(0), scene.initial_config,
                               approach.waypoints.front(), start_only);
    if (!move) continue;

    Pose2 lifted{grip_world.x, grip_world.y + scene.params.lift_height, grip_world.theta};
    auto lift = plan_cartesian(scene.arm, q_grasp, lifted, ctx.statics, carried, cart,
                               ManifoldId::slide(grasp_id));
    if (!lift) continue;

    Pose2 goal_tool = compose(ctx.goal_hover(), g.object_frame_pose);
    for (const JointConfig& q_target : inverse_kinematics(scene.arm, goal_tool)) {
      if (config_in_collision(scene.arm, q_target, ctx.statics, carried, cart.aperture,
                              cart.margin))
        continue;
      auto transfer = ctx.solve_task(ManifoldId::transfer(grasp_id), lift->waypoints.back(),
                                     q_target, start_only);
      if (!transfer) continue;

      DirectPlan plan;
      plan.segments.push_back(make_segment(ManifoldId::regrasp(0), SegmentKind::RegraspMove,
                                           -1, 0, move->waypoints));
      plan.segments.push_back(make_segment(ManifoldId::regrasp(0), SegmentKind::Approach,
                                           grasp_id, 0, approach.waypoints));
      plan.segments.push_back(make_segment(ManifoldId::slide(grasp_id), SegmentKind::Lift,
                                           grasp_id, 0, lift->waypoints));
      plan.segments.push_back(make_segment(ManifoldId::transfer(grasp_id),
                                           SegmentKind::TransferMove, grasp_id, -1,
                                           transfer->waypoints));
      return plan;
    }
  }
  return std::nullopt;
}

SegmentKind transition_kind(const TransitionSample& t) {
  if (t.to.kind == ManifoldId::Kind::Transfer) return SegmentKind::Lift;
  if (t.from.kind == ManifoldId::Kind::ReGrasp) return SegmentKind::Approach;
  return SegmentKind::Release;
}

SegmentKind intra_kind(ManifoldId::Kind kind) {
  switch (kind) {
    case ManifoldId::Kind::ReGrasp: return SegmentKind::RegraspMove;
    case ManifoldId::Kind::Slide: return SegmentKind::SlideMove;
    case ManifoldId::Kind::Transfer:
    default: return SegmentKind::TransferMove;
  }
}

// Assembles the full trajectory from the action path; every action on the
// path must carry a solution by now.
std::vector<PlanSegment> splice(const MdpModel& mdp, const FoliationModel& model,
                                const std::vector<int>& action_path,
                                const std::vector<std::optional<Trajectory>>& solutions) {
  std::vector<PlanSegment> segments;
  for (int aid : action_path) {
    const MdpAction& a = mdp.actions[aid];
    const std::optional<Trajectory>& sol = solutions[aid];
    if (a.kind == ActionKind::InterManifold) {
      const TransitionSample& t = model.transitions[a.transition];
      segments.push_back(make_segment(a.manifold, transition_kind(t), t.grasp, t.placement,
                                      t.trajectory.waypoints));
    } else {
      int grasp = a.manifold.kind == ManifoldId::Kind::ReGrasp ? -1 : a.manifold.co_param;
      int placement = a.manifold.kind == ManifoldId::Kind::ReGrasp ? a.manifold.co_param : -1;
      segments.push_back(make_segment(a.manifold, intra_kind(a.manifold.kind), grasp,
                                      placement, sol->waypoints));
    }
  }
  return segments;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

PlanResult finish(PlanResult result, PlanningContext& ctx, const Stopwatch& watch) {
  result.metrics.wall_ms = watch.ms();
  result.metrics.validated_edges = ctx.validated_edges;
  result.metrics.value_sweeps = ctx.value_sweeps;
  result.grasps.clear();
  for (const auto& [g, q] : ctx.classified) result.grasps.push_back(g);
  if (result.final_grasp >= 0)
    result.final_grasp_torque = ctx.classified[result.final_grasp].second.torque;
  return result;
}

// Episode loop shared by the MDP and the mode-transition-graph task planners.
template <typename PlanFn, typename SuccessFn, typename FailureFn, typename SolutionFn>
PlanResult replanning_loop(PlanningContext& ctx, const FoliationModel& model, MdpModel& mdp,
                           PlanResult result, const Stopwatch& watch, PlanFn plan_fn,
                           SuccessFn on_success, FailureFn on_failure, SolutionFn solution_of) {
  const Scene& scene = ctx.scene;
  for (int episode = 1; episode <= scene.params.episode_budget; ++episode) {
    result.episodes = episode;
    EpisodeLog log;
    log.episode = episode;
    TaskSequence seq;
    try {
      seq = plan_fn(log);
    } catch (const NoViablePolicyError&) {
      result.status = PlanStatus::NoViablePolicy;
      result.episode_log.push_back(log);
      return finish(std::move(result), ctx, watch);
    }
    log.chosen_path = seq.action_path;

    bool failed = false;
    for (const Task& task : seq.tasks) {
      if (solution_of(task.action_id)) continue;  // cached from an earlier episode
      auto traj = ctx.solve_task(task.manifold, task.start, task.end, model.placements);
      if (traj) {
        on_success(task.action_id, *traj);
      } else {
        log.failed_action = task.action_id;
        on_failure(task.action_id, log);
        failed = true;
        break;
      }
    }
    result.episode_log.push_back(log);
    if (!failed) {
      std::vector<std::optional<Trajectory>> solutions(mdp.actions.size());
      for (std::size_t a = 0; a < mdp.actions.size(); ++a) solutions[a] = solution_of(a);
      result.segments = splice(mdp, model, seq.action_path, solutions);
      const MdpAction& last = mdp.actions[seq.action_path.back()];
      result.final_grasp = last.manifold.co_param;
      result.status = PlanStatus::Solved;
      return finish(std::move(result), ctx, watch);
    }
  }
  result.status = PlanStatus::BudgetExhausted;
  return finish(std::move(result), ctx, watch);
}

PlanResult run_pipeline(const Scene& scene, bool use_dijkstra) {
  Stopwatch watch;
  PlanningContext ctx(scene);
  PlanResult result;
  result.planner_name = use_dijkstra ? "dijkstra-task" : "multimodal";

  bool any_high = false;
  for (const auto& [g, q] : ctx.classified) any_high |= q.label == GraspLabel::HighQuality;
  if (!any_high) {
    result.status = PlanStatus::NoHighQualityGrasp;
    return finish(std::move(result), ctx, watch);
  }

  // Direct pick with the best feasible high-quality grasp.
  for (const auto& [g, q] : ctx.classified) {
    if (q.label != GraspLabel::HighQuality) continue;
    if (auto direct = try_direct(ctx, g.id)) {
      result.status = PlanStatus::Solved;
      result.segments = std::move(direct->segments);
      result.episodes = 1;
      result.final_grasp = g.id;
      return finish(std::move(result), ctx, watch);
    }
  }

  // Rearrangement pipeline.
  FoliationModel model;
  try {
    auto placements = sample_placements(scene, scene.target, scene.params.placement_count,
                                        derive_seed(scene.seed, 202));
    model = build_foliation(scene, ctx.classified, placements);
    sample_transitions(model, scene, scene.params.pregrasp_offset, scene.params.lift_height);
  } catch (const NoHighQualityGraspError&) {
    result.status = PlanStatus::NoHighQualityGrasp;
    return finish(std::move(result), ctx, watch);
  }

  MdpModel mdp;
  try {
    mdp = build_mdp(model, scene);
  } catch (const NoTargetStateError&) {
    result.status = PlanStatus::NoViablePolicy;
    return finish(std::move(result), ctx, watch);
  }

  if (use_dijkstra) {
    DijkstraTaskPlanner planner(&mdp);
    return replanning_loop(
        ctx, model, mdp, std::move(result), watch,
        [&](EpisodeLog& log) {
          TaskSequence seq = planner.plan();
          double cost = 0.0;
          for (int aid : seq.action_path) cost += planner.weight(aid);
          log.score = cost;
          return seq;
        },
        [&](int aid, const Trajectory& traj) { planner.report_success(aid, traj); },
        [&](int aid, EpisodeLog& log) {
          planner.report_failure(aid);
          log.updates.emplace_back(aid, planner.weight(aid));
        },
        [&](int aid) { return planner.solution(aid); });
  }

  RewardConfig rewards{scene.params.r_target, scene.params.r_step, scene.params.r_failure,
                       scene.params.gamma};
  return replanning_loop(
      ctx, model, mdp, std::move(result), watch,
      [&](EpisodeLog& log) {
        ValueTable table =
            value_iterate(mdp, rewards, scene.params.vi_tol, scene.params.vi_max_iters);
        ctx.value_sweeps += table.sweeps;
        log.score = table.value[mdp.initial_state];
        return extract_task_sequence(mdp, table, rewards);
      },
      [&](int aid, const Trajectory& traj) { report_success(mdp, aid, traj); },
      [&](int aid, EpisodeLog& log) {
        log.updates = report_failure(mdp, aid, ctx.scene.params.decay,
                                     ctx.scene.params.decay_similar);
      },
      [&](int aid) { return mdp.actions[aid].solution; });
}

}  // namespace

PlanResult plan(const Scene& scene) { return run_pipeline(scene, false); }

PlanResult plan_dijkstra(const Scene& scene) { return run_pipeline(scene, true); }

PlanResult plan_baseline(const Scene& scene) {
  Stopwatch watch;
  PlanningContext ctx(scene);
  PlanResult result;
  result.planner_name = "baseline";
  for (const auto& [g, q] : ctx.classified) {
    ++result.episodes;  // grasp attempts
    if (auto direct = try_direct(ctx, g.id)) {
      result.status = PlanStatus::Solved;
      result.segments = std::move(direct->segments);
      result.final_grasp = g.id;
      return finish(std::move(result), ctx, watch);
    }
  }
  result.status = PlanStatus::NoViablePolicy;
  return finish(std::move(result), ctx, watch);
}

namespace {

PlanResult replan_for(const std::string& planner_name, const Scene& scene) {
  if (planner_name == "baseline") return plan_baseline(scene);
  if (planner_name == "dijkstra-task") return plan_dijkstra(scene);
  return plan(scene);
}

// In-hand disturbance of one grasp event, split by what the mechanics allow:
// the closing fingers can nudge the object along the table only within the
// pad slack; slip along the fingers and rotation about the pinch stay latent
// until the object leaves the table.
struct InHandError {
  Pose2 contact = Pose2::identity();   // object-frame error while on the table
  Pose2 airborne = Pose2::identity();  // object-frame error once lifted
};

InHandError sample_in_hand_error(Rng& rng, const NoiseParams& noise, const Grasp& grasp,
                                 double pad_slack, double resting_theta,
                                 double finger_length) {
  InHandError err;
  if (!noise.enabled()) return err;
  double lateral = std::clamp(rng.gaussian(noise.sigma_xy), -pad_slack, pad_slack);
  double along = rng.gaussian(noise.sigma_xy);
  double spin = rng.gaussian(noise.sigma_theta);

  // Table-plane nudge, expressed in the object frame.
  Vec2 t = Pose2{0.0, 0.0, -resting_theta}.rotate({lateral, 0.0});
  err.contact = Pose2{t.x, t.y, 0.0};

  // Slip along the fingers plus rotation about the pinch point, conjugated
  // from the tool frame into the object frame.
  Vec2 pinch{finger_length, 0.0};
  Vec2 spun = Pose2{0.0, 0.0, spin}.rotate(pinch);
  Pose2 shift_tool{pinch.x - spun.x + along, pinch.y - spun.y, spin};
  Pose2 tool_obj = inverse(grasp.object_frame_pose);
  err.airborne = compose(compose(compose(grasp.object_frame_pose, shift_tool), tool_obj),
                         err.contact);
  return err;
}

}  // namespace

StabilityReport execute(const Scene& scene, const PlanResult& result, const NoiseParams& noise,
                        uint64_t seed) {
  if (result.status != PlanStatus::Solved)
    throw std::invalid_argument("execute: plan is not solved");

  Rng rng(seed);
  const ComEstimate true_com = estimate_com(scene.target, 0.0, 0);
  const double tau_cap_mu = scene.params.torsional_mu;
  const double patch = scene.params.patch_radius;

  Scene current = scene;
  PlanResult active = result;
  StabilityReport report;
  int replans = 0;

  while (true) {
    bool reobserve = false;
    Pose2 true_obj = current.start_placement;
    InHandError noise_err;
    bool airborne = false;
    std::optional<Grasp> holding;
    JointConfig last_config = current.initial_config;
    double last_lift_delta_r = 0.0;
    bool completed = true;

    auto effective_err = [&]() { return airborne ? noise_err.airborne : noise_err.contact; };

    for (const PlanSegment& seg : active.segments) {
      const Grasp* seg_grasp = seg.grasp >= 0 ? &active.grasps.at(seg.grasp) : nullptr;
      double aperture = seg_grasp ? grasp_aperture(current.arm.gripper, seg_grasp->width,
                                                   current.params.grasp_pad_clearance)
                                  : current.arm.gripper.max_aperture;
      if (seg.kind == SegmentKind::Release && holding) {
        // The object detaches at the first waypoint of the retreat.
        Pose2 in_hand = compose(inverse(holding->object_frame_pose), effective_err());
        Pose2 landed = compose(forward_kinematics(current.arm, seg.waypoints.front()), in_hand);
        true_obj = Pose2{landed.x, current.rest_y(current.start_placement.theta),
                         current.start_placement.theta};
        holding.reset();
      }
      Pose2 in_hand_err = effective_err();
      std::optional<CarriedObject> carried;
      std::vector<Obstacle> obstacles = current.static_obstacles();
      if (holding) {
        carried = CarriedObject{
            current.target, compose(inverse(holding->object_frame_pose), in_hand_err)};
      } else {
        obstacles.push_back({current.target, true_obj});
      }
      for (const JointConfig& q : seg.waypoints) {
        if (config_in_collision(current.arm, q, obstacles, carried, aperture,
                                current.params.collision_margin)) {
          report.delta_r = last_lift_delta_r;
          report.stability = 0.0;
          report.success = false;
          return report;
        }
        last_config = q;
      }

      switch (seg.kind) {
        case SegmentKind::Approach: {
          holding = *seg_grasp;
          noise_err = perturbation(rng, noise);
          airborne = false;
          break;
        }
        case SegmentKind::Lift: {
          airborne = true;
          // Executing grasp in the true object frame.
          Pose2 err = effective_err();
          Grasp true_grasp = *holding;
          true_grasp.object_frame_pose = compose(inverse(err), holding->object_frame_pose);
          true_grasp.contact_a = inverse(err).apply(holding->contact_a);
          true_grasp.contact_b = inverse(err).apply(holding->contact_b);
          last_lift_delta_r =
              lift_rotation(true_grasp, true_com, current.arm.gripper, tau_cap_mu, patch,
                            current.start_placement.theta);
          break;
        }
        case SegmentKind::Release: {
          if (noise.enabled()) reobserve = true;
          break;
        }
        default:
          break;
      }
      if (reobserve) {
        completed = false;
        break;
      }
    }

    if (completed) {
      report.delta_r = last_lift_delta_r;
      report.success = last_lift_delta_r <= M_PI / 2.0 + 1e-12;
      report.stability = report.success
                             ? 1.0 / std::max(last_lift_delta_r,
                                              current.params.stability_epsilon)
                             : 0.0;
      return report;
    }

    // Re-observe: rebuild the scene from the true pose and plan again.
    if (++replans > current.params.episode_budget) {
      report.success = false;
      report.stability = 0.0;
      return report;
    }
    current.start_placement = true_obj;
    current.initial_config = last_config;
    current.seed = derive_seed(current.seed, 7000 + static_cast<uint64_t>(replans));
    active = replan_for(result.planner_name, current);
    if (active.status != PlanStatus::Solved) {
      report.success = false;
      report.stability = 0.0;
      return report;
    }
  }
}

}  // namespace slideplan
