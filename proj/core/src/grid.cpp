#include "mapcs/grid.hpp"

#include <cstdlib>

namespace mapcs {

std::string_view to_string(Step s) {
  switch (s) {
    case Step::up: return "up";
    case Step::down: return "down";
    case Step::left: return "left";
    case Step::right: return "right";
  }
  return "up";
}

std::optional<Step> parse_step(std::string_view s) {
  for (auto step : kAllSteps) {
    if (to_string(step) == s) return step;
  }
  return std::nullopt;
}

Cell neighbor(Cell c, Step s) {
  switch (s) {
    case Step::up: return {c.x, c.y - 1};
    case Step::down: return {c.x, c.y + 1};
    case Step::left: return {c.x - 1, c.y};
    case Step::right: return {c.x + 1, c.y};
  }
  return c;
}

int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

bool adjacent(Cell a, Cell b) { return manhattan(a, b) == 1; }

std::optional<Step> step_between(Cell from, Cell to) {
  for (auto s : kAllSteps) {
    if (neighbor(from, s) == to) return s;
  }
  return std::nullopt;
}

}  // namespace mapcs
