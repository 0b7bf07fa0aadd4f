#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapcs/dataset.hpp"
#include "mapcs/metrics.hpp"

namespace mapcs {

/// Pooled statistics for one condition (or for all of them).
struct ConditionReport {
  std::string condition;
  std::size_t n_sessions = 0;
  DialogStats dialog;
  std::size_t games = 0;
  std::size_t games_completed = 0;
  double total_duration_s = 0.0;
  double total_route_distance = 0.0;
  std::array<double, 4> questionnaire_sums{};  // task_enjoy, task_success, difficult_comm, difficult_ins
  std::size_t questionnaire_count = 0;

  void add_session(const Session& s, const MetricOptions& opts);

  double percent_complete() const;
  double mean_game_time_s() const;
  double mean_route_distance() const;
  double mean_questionnaire(std::size_t item) const;
};

struct Report {
  std::vector<ConditionReport> conditions;  // known strategies first, in their canonical order
  ConditionReport all;
};

/// Scores the human side of every dialog (one dialog per game).
Report build_report(const Dataset& ds, const MetricOptions& opts = {});

/// Metrics as rows, conditions as columns, then an "All" column.
std::string render_report_text(const Report& r);
nlohmann::json report_to_json(const Report& r);

}  // namespace mapcs
