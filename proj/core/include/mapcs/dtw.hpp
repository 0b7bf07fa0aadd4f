#pragma once

#include <cstdint>
#include <span>

#include "mapcs/grid.hpp"

namespace mapcs {

struct RouteScore {
  std::int64_t raw_dtw_cost = 0;
  double normalized = 0.0;  // raw / number of target cells
  bool operator==(const RouteScore&) const = default;
};

/// Minimum-cost monotone alignment of the two cell sequences (Manhattan cell
/// cost; match, insert and delete steps; first and last cells aligned).
/// Throws std::domain_error when either sequence is empty.
std::int64_t dtw_cost(std::span<const Cell> a, std::span<const Cell> b);

RouteScore dtw_route_distance(std::span<const Cell> trace, std::span<const Cell> target);

}  // namespace mapcs
