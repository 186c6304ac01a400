#include "render.hpp"

#include <cmath>
#include <sstream>

namespace slideplan {

namespace {

struct Viewport {
  double min_x, max_x, min_y, max_y;
  double scale;

  double sx(double x) const { return (x - min_x) * scale; }
  double sy(double y) const { return (max_y - y) * scale; }
  double width() const { return (max_x - min_x) * scale; }
  double height() const { return (max_y - min_y) * scale; }
};

void emit_polygon(std::ostringstream& svg, const Viewport& view, const ConvexPolygon& poly,
                  const char* fill, const char* stroke) {
  svg << "  <polygon points=\"";
  for (const Vec2& v : poly.vertices()) svg << view.sx(v.x) << "," << view.sy(v.y) << " ";
  svg << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"1\"/>\n";
}

void emit_shape(std::ostringstream& svg, const Viewport& view, const Shape2& shape,
                const Pose2& pose, const char* fill, const char* stroke) {
  for (const auto& part : shape.parts)
    emit_polygon(svg, view, part.transformed(pose), fill, stroke);
}

std::string render_frame(const Scene& scene, const PlanResult& result, const Viewport& view,
                         const JointConfig& q, const PlanSegment& segment,
                         const Pose2& object_pose, bool holding, int frame_index) {
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << view.width()
      << "\" height=\"" << view.height() << "\" viewBox=\"0 0 " << view.width() << " "
      << view.height() << "\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << view.width() << "\" height=\"" << view.height()
      << "\" fill=\"white\"/>\n";

  const Obstacle table = scene.table.as_obstacle();
  emit_shape(svg, view, table.shape, table.pose, "#b08968", "#7f5539");
  for (const Obstacle& obs : scene.obstacles)
    emit_shape(svg, view, obs.shape, obs.pose, "#adb5bd", "#495057");

  emit_shape(svg, view, scene.target, object_pose, "#74c69d", "#2d6a4f");

  const Grasp* grasp = segment.grasp >= 0 ? &result.grasps[segment.grasp] : nullptr;
  double aperture = grasp ? grasp_aperture(scene.arm.gripper, grasp->width,
                                           scene.params.grasp_pad_clearance)
                          : scene.arm.gripper.max_aperture;
  emit_shape(svg, view, arm_shape(scene.arm, q, aperture), Pose2::identity(), "#a2d2ff",
             "#1d3557");
  // COM marker.
  auto [com, mass] = centroid_and_mass(scene.target);
  Vec2 com_world = object_pose.apply(com);
  svg << "  <circle cx=\"" << view.sx(com_world.x) << "\" cy=\"" << view.sy(com_world.y)
      << "\" r=\"4\" fill=\"#e63946\"/>\n";
  svg << "  <text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"14\">frame "
      << frame_index << " manifold " << to_string(segment.manifold) << " "
      << to_string(segment.kind) << (holding ? " [holding]" : "") << " mass " << mass
      << "kg</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::vector<std::string> render_frames(const Scene& scene, const PlanResult& result,
                                       int stride) {
  if (result.status != PlanStatus::Solved)
    throw std::invalid_argument("render_frames: plan is not solved");
  if (stride < 1) throw std::invalid_argument("render_frames: stride must be >= 1");

  double reach = scene.arm.total_reach() + scene.arm.gripper.finger_length;
  Viewport view{std::min(scene.table.x0, scene.arm.base.x - 0.1) - 0.05,
                std::max(scene.table.x1, scene.arm.base.x + reach) + 0.05,
                scene.table.height - scene.table.thickness - 0.05,
                scene.arm.base.y + reach + 0.05,
                1.0};
  view.scale = 900.0 / (view.max_x - view.min_x);

  std::vector<std::string> frames;
  Pose2 object_pose = scene.start_placement;
  bool holding = false;
  int waypoint_index = 0;
  int frame_index = 0;

  for (const PlanSegment& seg : result.segments) {
    const Grasp* grasp = seg.grasp >= 0 ? &result.grasps[seg.grasp] : nullptr;
    if (seg.kind == SegmentKind::Release && holding && grasp) {
      // The object parks where the retreat starts.
      object_pose = compose(forward_kinematics(scene.arm, seg.waypoints.front()),
                            inverse(grasp->object_frame_pose));
      holding = false;
    }
    for (const JointConfig& q : seg.waypoints) {
      if (holding && grasp)
        object_pose =
            compose(forward_kinematics(scene.arm, q), inverse(grasp->object_frame_pose));
      if (waypoint_index % stride == 0)
        frames.push_back(
            render_frame(scene, result, view, q, seg, object_pose, holding, frame_index++));
      ++waypoint_index;
    }
    if (seg.kind == SegmentKind::Approach) holding = true;
  }
  return frames;
}

}  // namespace slideplan
