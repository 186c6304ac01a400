#pragma once

#include <string>
#include <vector>

#include "planner.hpp"

namespace slideplan {

// One standalone SVG document per `stride` waypoints of the spliced plan,
// showing table, obstacles, arm, gripper, object, COM marker, and the active
// manifold. Throws std::invalid_argument for unsolved plans.
std::vector<std::string> render_frames(const Scene& scene, const PlanResult& result, int stride);

}  // namespace slideplan
