#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace slideplan {

constexpr double kGeomEps = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
  Vec2 perp() const { return {-y, x}; }
  Vec2 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
  }
};

// Wraps an angle into (-pi, pi].
double normalize_angle(double a);

// Planar rigid-body pose; theta is kept normalized to (-pi, pi].
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2() = default;
  Pose2(double px, double py, double ptheta) : x(px), y(py), theta(normalize_angle(ptheta)) {}

  static Pose2 identity() { return {}; }

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }

  // Applies this transform to a point expressed in the local frame.
  Vec2 apply(const Vec2& p) const {
    double c = std::cos(theta), s = std::sin(theta);
    return {x + c * p.x - s * p.y, y + s * p.x + c * p.y};
  }

  // Rotates a free vector (no translation).
  Vec2 rotate(const Vec2& v) const {
    double c = std::cos(theta), s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
  }
};

// a then b-in-a's-frame.
Pose2 compose(const Pose2& a, const Pose2& b);
Pose2 inverse(const Pose2& p);

struct Aabb {
  Vec2 lo{1e300, 1e300};
  Vec2 hi{-1e300, -1e300};

  void expand(const Vec2& p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  void expand(const Aabb& o) {
    expand(o.lo);
    expand(o.hi);
  }
  bool contains(const Vec2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

// Strictly convex polygon, counter-clockwise vertex order. The constructor
// validates convexity, winding, and vertex separation and throws
// std::invalid_argument on violation.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  static ConvexPolygon rectangle(double cx, double cy, double width, double height);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  double area() const;
  Vec2 centroid() const;
  Aabb aabb() const;
  ConvexPolygon transformed(const Pose2& pose) const;

 private:
  std::vector<Vec2> vertices_;
};

// Rigid body made of convex parts in a common body frame, uniform density.
struct Shape2 {
  std::vector<ConvexPolygon> parts;
  double density = 1.0;  // kg/m^2

  Shape2(std::vector<ConvexPolygon> p, double d);

  double area() const;
  Aabb aabb() const;
  Shape2 transformed(const Pose2& pose) const;
  // Lowest body-frame y after rotating by theta (used for table contact).
  double bottom_offset(double theta) const;
};

// Area-weighted centroid (body frame) and total mass.
std::pair<Vec2, double> centroid_and_mass(const Shape2& s);

// Penetration test (touching boundaries do not count as intersection).
bool convex_intersect(const ConvexPolygon& a, const ConvexPolygon& b);

// Exact separation distance; 0 when the polygons penetrate or touch.
double convex_distance(const ConvexPolygon& a, const ConvexPolygon& b);

// True iff any pair of convex parts has separation < margin. margin 0 is the
// exact separating-axis penetration test.
bool shapes_intersect(const Shape2& s1, const Pose2& pose1, const Shape2& s2, const Pose2& pose2,
                      double margin = 0.0);

double segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

}  // namespace slideplan
