#include "grasping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rng.hpp"

namespace slideplan {

namespace {

struct RayHit {
  double t_in = 0.0;
  double t_out = 0.0;
  Vec2 exit_normal;
};

// Clips the ray origin + t*dir against one convex part. Returns the coverage
// interval and the outward normal of the exit edge.
bool clip_ray(const ConvexPolygon& poly, const Vec2& origin, const Vec2& dir, RayHit& hit) {
  const auto& v = poly.vertices();
  double t_in = -std::numeric_limits<double>::infinity();
  double t_out = std::numeric_limits<double>::infinity();
  Vec2 exit_normal;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vec2 edge = v[(i + 1) % v.size()] - v[i];
    Vec2 n = Vec2{edge.y, -edge.x}.normalized();  // outward for CCW
    double denom = dir.dot(n);
    double dist = (v[i] - origin).dot(n);  // signed distance of plane along n
    if (std::abs(denom) < 1e-15) {
      if (dist < 0.0) return false;  // parallel and outside
      continue;
    }
    double t = dist / denom;
    if (denom > 0.0) {
      if (t < t_out) {
        t_out = t;
        exit_normal = n;
      }
    } else {
      t_in = std::max(t_in, t);
    }
  }
  if (t_in > t_out) return false;
  hit = {t_in, t_out, exit_normal};
  return true;
}

bool strictly_inside_any(const Shape2& shape, const Vec2& p) {
  for (const auto& part : shape.parts) {
    const auto& v = part.vertices();
    bool inside = true;
    for (std::size_t i = 0; i < v.size() && inside; ++i) {
      Vec2 edge = v[(i + 1) % v.size()] - v[i];
      if (edge.cross(p - v[i]) <= 1e-9) inside = false;
    }
    if (inside) return true;
  }
  return false;
}

// Farthest exit of the part-union along the ray, merging per-part coverage
// intervals that chain from t = 0.
bool union_exit(const Shape2& shape, const Vec2& origin, const Vec2& dir, double& exit_t,
                Vec2& exit_normal) {
  struct Interval {
    double a, b;
    Vec2 n;
  };
  std::vector<Interval> intervals;
  for (const auto& part : shape.parts) {
    RayHit hit;
    if (!clip_ray(part, origin, dir, hit)) continue;
    if (hit.t_out < -1e-9) continue;
    intervals.push_back({std::max(hit.t_in, -1e-9), hit.t_out, hit.exit_normal});
  }
  if (intervals.empty()) return false;
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& x, const Interval& y) { return x.a < y.a; });
  double end = 0.0;
  Vec2 normal;
  bool covered = false;
  for (const Interval& iv : intervals) {
    if (iv.a > end + 1e-9) break;
    if (iv.b > end) {
      end = iv.b;
      normal = iv.n;
      covered = true;
    }
  }
  if (!covered || end <= 1e-9) return false;
  exit_t = end;
  exit_normal = normal;
  return true;
}

}  // namespace

std::vector<Grasp> sample_grasps(const Shape2& object, const GripperModel& gripper,
                                 double cone_half_angle, double spacing) {
  std::vector<Grasp> grasps;
  const double cos_cone = std::cos(cone_half_angle);

  auto already_emitted = [&](const Vec2& a, const Vec2& b, double heading) {
    for (const Grasp& g : grasps) {
      bool same_pair = ((g.contact_a - a).norm() < 1e-6 && (g.contact_b - b).norm() < 1e-6) ||
                       ((g.contact_a - b).norm() < 1e-6 && (g.contact_b - a).norm() < 1e-6);
      if (same_pair && std::abs(normalize_angle(g.object_frame_pose.theta - heading)) < 1e-6)
        return true;
    }
    return false;
  };

  for (const auto& part : object.parts) {
    const auto& v = part.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      Vec2 p0 = v[i];
      Vec2 p1 = v[(i + 1) % v.size()];
      double edge_len = (p1 - p0).norm();
      Vec2 edge_dir = (p1 - p0).normalized();
      Vec2 outward = {edge_dir.y, -edge_dir.x};
      for (double s = spacing / 2.0; s < edge_len; s += spacing) {
        Vec2 p = p0 + edge_dir * s;
        // Skip points buried inside the union or with blocked outward side.
        if (strictly_inside_any(object, p + outward * 1e-5)) continue;
        double exit_t;
        Vec2 exit_normal;
        if (!union_exit(object, p, outward * -1.0, exit_t, exit_normal)) continue;
        if (exit_t > gripper.max_aperture + 1e-12) continue;
        // Anti-parallel contact normals within the friction cone.
        if (outward.dot(exit_normal) > -cos_cone + 1e-12) continue;
        Vec2 q = p + outward * -exit_t;
        if (strictly_inside_any(object, q + exit_normal * 1e-5)) continue;

        Vec2 pinch = (q - p).normalized();
        Vec2 center = (p + q) * 0.5;
        for (int side = 0; side < 2; ++side) {
          Vec2 h = side == 0 ? pinch.perp() : pinch.perp() * -1.0;
          double heading = std::atan2(h.y, h.x);
          if (already_emitted(p, q, heading)) continue;
          Grasp g;
          g.id = static_cast<int>(grasps.size());
          g.contact_a = p;
          g.contact_b = q;
          g.width = exit_t;
          g.pinch_normal = pinch;
          Vec2 tool = center - h * gripper.finger_length;
          g.object_frame_pose = Pose2{tool.x, tool.y, heading};
          grasps.push_back(g);
        }
      }
    }
  }
  return grasps;
}

ComEstimate estimate_com(const Shape2& object, double noise_sigma, uint64_t seed) {
  auto [centroid, mass] = centroid_and_mass(object);
  ComEstimate est{centroid, mass};
  if (noise_sigma > 0.0) {
    Rng rng(seed);
    est.point.x += rng.gaussian(noise_sigma);
    est.point.y += rng.gaussian(noise_sigma);
    Aabb box = object.aabb();
    est.point.x = std::clamp(est.point.x, box.lo.x, box.hi.x);
    est.point.y = std::clamp(est.point.y, box.lo.y, box.hi.y);
  }
  return est;
}

double grasp_torque(const Grasp& g, const ComEstimate& com, double carry_orientation) {
  Vec2 offset = com.point - g.center();
  Pose2 rot{0.0, 0.0, carry_orientation};
  return com.mass * kGravity * std::abs(rot.rotate(offset).x);
}

std::vector<std::pair<Grasp, GraspQuality>> classify(const std::vector<Grasp>& grasps,
                                                     const ComEstimate& com, double threshold,
                                                     double carry_orientation) {
  std::vector<std::pair<Grasp, GraspQuality>> out;
  out.reserve(grasps.size());
  for (const Grasp& g : grasps) {
    double tau = grasp_torque(g, com, carry_orientation);
    GraspLabel label = tau <= threshold ? GraspLabel::HighQuality : GraspLabel::LowQuality;
    out.emplace_back(g, GraspQuality{tau, label});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second.torque != b.second.torque) return a.second.torque < b.second.torque;
    return a.first.id < b.first.id;
  });
  return out;
}

double lift_rotation(const Grasp& g, const ComEstimate& com, const GripperModel& gripper,
                     double torsional_mu, double patch_radius, double carry_orientation) {
  double tau_cap = torsional_mu * gripper.grip_force * patch_radius;
  double tau = grasp_torque(g, com, carry_orientation);
  if (tau <= tau_cap) return 0.0;
  Pose2 rot{0.0, 0.0, carry_orientation};
  Vec2 d = rot.rotate(com.point - g.center());
  double len = d.norm();
  if (len < 1e-12) return 0.0;
  // Pivot about the pinch center until the COM hangs straight down.
  return std::acos(std::clamp(-d.y / len, -1.0, 1.0));
}

}  // namespace slideplan
