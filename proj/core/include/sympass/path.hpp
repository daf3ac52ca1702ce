#pragma once

#include <optional>
#include <vector>

#include "sympass/grid.hpp"

namespace sympass {

/// Which admissible class of curves a Path belongs to.
enum class PathFamily {
  fixed_endpoint,     ///< gamma(0) = 0, gamma(1) = v with f(lambda; v) < 0 on the whole interval
  negative_endpoint,  ///< gamma(0) = 0, f(lambda; gamma(1)) < 0 for the lambda in use
};

/// A discretised curve gamma : [0, 1] -> X, node 0 is gamma(0) and the last node is gamma(1).
struct Path {
  std::vector<GridFunction> nodes;
  PathFamily family = PathFamily::fixed_endpoint;
  /// Required endpoint for PathFamily::fixed_endpoint.
  std::optional<GridFunction> endpoint;
  /// Set when a symmetric curve approximation could not reach its target distance.
  bool approximation_failed = false;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
  [[nodiscard]] const GridFunction& front() const { return nodes.front(); }
  [[nodiscard]] const GridFunction& back() const { return nodes.back(); }
};

}  // namespace sympass
