#include "geom.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace slideplan {

double normalize_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

Pose2 compose(const Pose2& a, const Pose2& b) {
  Vec2 p = a.apply({b.x, b.y});
  return {p.x, p.y, a.theta + b.theta};
}

Pose2 inverse(const Pose2& p) {
  double c = std::cos(p.theta), s = std::sin(p.theta);
  return {-(c * p.x + s * p.y), -(-s * p.x + c * p.y), -p.theta};
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw std::invalid_argument("ConvexPolygon: fewer than 3 vertices");
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((vertices_[i] - vertices_[j]).norm() < kGeomEps)
        throw std::invalid_argument("ConvexPolygon: duplicate vertices");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 e0 = vertices_[(i + 1) % n] - vertices_[i];
    Vec2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    if (e0.cross(e1) <= 0.0)
      throw std::invalid_argument("ConvexPolygon: vertices not strictly convex CCW");
  }
}

ConvexPolygon ConvexPolygon::rectangle(double cx, double cy, double width, double height) {
  double hw = width / 2.0, hh = height / 2.0;
  return ConvexPolygon({{cx - hw, cy - hh}, {cx + hw, cy - hh}, {cx + hw, cy + hh}, {cx - hw, cy + hh}});
}

double ConvexPolygon::area() const {
  double a = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) a += vertices_[i].cross(vertices_[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 ConvexPolygon::centroid() const {
  double a = 0.0;
  Vec2 c{0.0, 0.0};
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = vertices_[i];
    const Vec2& q = vertices_[(i + 1) % n];
    double w = p.cross(q);
    a += w;
    c = c + (p + q) * w;
  }
  a *= 0.5;
  return c * (1.0 / (6.0 * a));
}

Aabb ConvexPolygon::aabb() const {
  Aabb box;
  for (const Vec2& v : vertices_) box.expand(v);
  return box;
}

ConvexPolygon ConvexPolygon::transformed(const Pose2& pose) const {
  std::vector<Vec2> out;
  out.reserve(vertices_.size());
  for (const Vec2& v : vertices_) out.push_back(pose.apply(v));
  return ConvexPolygon(std::move(out));
}

Shape2::Shape2(std::vector<ConvexPolygon> p, double d) : parts(std::move(p)), density(d) {
  if (parts.empty()) throw std::invalid_argument("Shape2: no parts");
  if (density <= 0.0) throw std::invalid_argument("Shape2: density must be positive");
  if (area() <= 0.0) throw std::invalid_argument("Shape2: zero area");
}

double Shape2::area() const {
  double a = 0.0;
  for (const auto& part : parts) a += part.area();
  return a;
}

Aabb Shape2::aabb() const {
  Aabb box;
  for (const auto& part : parts) box.expand(part.aabb());
  return box;
}

Shape2 Shape2::transformed(const Pose2& pose) const {
  std::vector<ConvexPolygon> out;
  out.reserve(parts.size());
  for (const auto& part : parts) out.push_back(part.transformed(pose));
  return Shape2(std::move(out), density);
}

double Shape2::bottom_offset(double theta) const {
  Pose2 rot{0.0, 0.0, theta};
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& part : parts)
    for (const Vec2& v : part.vertices()) lo = std::min(lo, rot.apply(v).y);
  return lo;
}

std::pair<Vec2, double> centroid_and_mass(const Shape2& s) {
  double total_area = 0.0;
  Vec2 weighted{0.0, 0.0};
  for (const auto& part : s.parts) {
    double a = part.area();
    weighted = weighted + part.centroid() * a;
    total_area += a;
  }
  return {weighted * (1.0 / total_area), s.density * total_area};
}

namespace {

struct Interval {
  double lo, hi;
};

Interval project(const ConvexPolygon& poly, const Vec2& axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec2& v : poly.vertices()) {
    double d = v.dot(axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

bool separated_on_axes(const ConvexPolygon& a, const ConvexPolygon& b) {
  const auto& verts = a.vertices();
  const std::size_t n = verts.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 edge = (verts[(i + 1) % n] - verts[i]).normalized();
    Vec2 axis = edge.perp();
    Interval ia = project(a, axis);
    Interval ib = project(b, axis);
    // Contact within the geometry epsilon counts as touching, not penetration
    // (objects rest exactly on the table plane).
    if (ia.hi <= ib.lo + kGeomEps || ib.hi <= ia.lo + kGeomEps) return true;
  }
  return false;
}

}  // namespace

bool convex_intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
  return !separated_on_axes(a, b) && !separated_on_axes(b, a);
}

double segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  Vec2 d1 = a1 - a0, d2 = b1 - b0, r = a0 - b0;
  double A = d1.dot(d1), E = d2.dot(d2), F = d2.dot(r);
  double s = 0.0, t = 0.0;
  if (A <= 1e-18 && E <= 1e-18) return r.norm();
  if (A <= 1e-18) {
    t = std::clamp(F / E, 0.0, 1.0);
  } else {
    double C = d1.dot(r);
    if (E <= 1e-18) {
      s = std::clamp(-C / A, 0.0, 1.0);
    } else {
      double B = d1.dot(d2);
      double denom = A * E - B * B;
      if (denom > 1e-18) s = std::clamp((B * F - C * E) / denom, 0.0, 1.0);
      t = (B * s + F) / E;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-C / A, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((B - C) / A, 0.0, 1.0);
      }
    }
  }
  Vec2 p = a0 + d1 * s;
  Vec2 q = b0 + d2 * t;
  return (p - q).norm();
}

double convex_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
  if (convex_intersect(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const Vec2& p0 = va[i];
    const Vec2& p1 = va[(i + 1) % va.size()];
    for (std::size_t j = 0; j < vb.size(); ++j) {
      const Vec2& q0 = vb[j];
      const Vec2& q1 = vb[(j + 1) % vb.size()];
      best = std::min(best, segment_distance(p0, p1, q0, q1));
    }
  }
  return best;
}

bool shapes_intersect(const Shape2& s1, const Pose2& pose1, const Shape2& s2, const Pose2& pose2,
                      double margin) {
  std::vector<ConvexPolygon> parts1, parts2;
  parts1.reserve(s1.parts.size());
  parts2.reserve(s2.parts.size());
  for (const auto& p : s1.parts) parts1.push_back(p.transformed(pose1));
  for (const auto& p : s2.parts) parts2.push_back(p.transformed(pose2));
  for (const auto& a : parts1) {
    Aabb box_a = a.aabb();
    for (const auto& b : parts2) {
      Aabb box_b = b.aabb();
      if (box_a.lo.x > box_b.hi.x + margin || box_b.lo.x > box_a.hi.x + margin ||
          box_a.lo.y > box_b.hi.y + margin || box_b.lo.y > box_a.hi.y + margin)
        continue;
      if (margin <= 0.0) {
        if (convex_intersect(a, b)) return true;
      } else if (convex_distance(a, b) < margin) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace slideplan
