#pragma once

#include <stdexcept>
#include <string>

#include "planner.hpp"

namespace slideplan {

// Schema violation with the offending field path (e.g. "arm.gripper.max_aperture").
struct ParseError : std::runtime_error {
  std::string path;

  ParseError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path.empty() ? message : field_path + ": " + message),
        path(std::move(field_path)) {}
};

// Strict parse: unknown fields are rejected, every number must be finite, and
// the scene invariants (placements resting and collision-free) are enforced.
Scene scene_from_json(const std::string& text);

// Canonical serialization; parse(serialize(parse(x))) is the identity.
std::string scene_to_json(const Scene& scene);

// FNV-1a over the canonical serialization, as a fixed-width hex string.
std::string scene_hash(const Scene& scene);

std::string plan_to_json(const PlanResult& result, const std::string& scene_hash,
                         bool with_timing);

struct LoadedPlan {
  PlanResult result;
  std::string scene_hash;
};

LoadedPlan plan_from_json(const std::string& text);

std::string report_to_json(const StabilityReport& report);

}  // namespace slideplan
