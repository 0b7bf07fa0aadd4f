#pragma once

#include <compare>
#include <optional>
#include <string_view>

namespace mapcs {

/// Grid cell; x grows rightward, y grows downward.
struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

enum class Step { up, down, left, right };

inline constexpr Step kAllSteps[] = {Step::up, Step::down, Step::left, Step::right};

std::string_view to_string(Step s);
std::optional<Step> parse_step(std::string_view s);

Cell neighbor(Cell c, Step s);
int manhattan(Cell a, Cell b);
bool adjacent(Cell a, Cell b);

/// The step leading from `from` to the adjacent cell `to`.
std::optional<Step> step_between(Cell from, Cell to);

}  // namespace mapcs
