#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace slideplan {

// One leaf of one of the three foliations. The co-parameter selects the leaf:
// a placement index for ReGrasp, a grasp id for Slide and Transfer.
struct ManifoldId {
  enum class Kind : uint8_t { ReGrasp, Slide, Transfer };

  Kind kind = Kind::ReGrasp;
  int co_param = 0;

  auto operator<=>(const ManifoldId&) const = default;

  static ManifoldId regrasp(int placement) { return {Kind::ReGrasp, placement}; }
  static ManifoldId slide(int grasp) { return {Kind::Slide, grasp}; }
  static ManifoldId transfer(int grasp) { return {Kind::Transfer, grasp}; }
};

inline const char* manifold_kind_name(ManifoldId::Kind k) {
  switch (k) {
    case ManifoldId::Kind::ReGrasp: return "regrasp";
    case ManifoldId::Kind::Slide: return "slide";
    case ManifoldId::Kind::Transfer: return "transfer";
  }
  return "?";
}

inline std::string to_string(const ManifoldId& m) {
  return std::string(manifold_kind_name(m.kind)) + "(" + std::to_string(m.co_param) + ")";
}

}  // namespace slideplan
