#include "mapcs/dtw.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mapcs {

std::int64_t dtw_cost(std::span<const Cell> a, std::span<const Cell> b) {
  if (a.empty() || b.empty()) throw std::domain_error("route comparison needs two nonempty paths");
  const std::size_t m = b.size();
  constexpr auto inf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> prev(m, inf), cur(m, inf);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::int64_t best;
      if (i == 0 && j == 0) {
        best = 0;
      } else {
        best = inf;
        if (i > 0) best = std::min(best, prev[j]);
        if (j > 0) best = std::min(best, cur[j - 1]);
        if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
      }
      cur[j] = best + manhattan(a[i], b[j]);
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

RouteScore dtw_route_distance(std::span<const Cell> trace, std::span<const Cell> target) {
  RouteScore s;
  s.raw_dtw_cost = dtw_cost(trace, target);
  s.normalized = static_cast<double>(s.raw_dtw_cost) / static_cast<double>(target.size());
  return s;
}

}  // namespace mapcs
