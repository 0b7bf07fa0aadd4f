#include "mapcs/report.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>

namespace mapcs {

using nlohmann::json;

void ConditionReport::add_session(const Session& s, const MetricOptions& opts) {
  ++n_sessions;
  for (const auto& g : s.games) {
    dialog.add_dialog(g.transcript, opts);
    ++games;
    if (g.completed()) ++games_completed;
    total_duration_s += g.duration_s();
    if (g.route) total_route_distance += g.route->normalized;
  }
  for (const auto& q : s.questionnaires) {
    questionnaire_sums[0] += q.task_enjoy;
    questionnaire_sums[1] += q.task_success;
    questionnaire_sums[2] += q.difficult_comm;
    questionnaire_sums[3] += q.difficult_ins;
    ++questionnaire_count;
  }
}

double ConditionReport::percent_complete() const {
  return games ? 100.0 * static_cast<double>(games_completed) / static_cast<double>(games) : 0.0;
}
double ConditionReport::mean_game_time_s() const { return games ? total_duration_s / static_cast<double>(games) : 0.0; }
double ConditionReport::mean_route_distance() const {
  return games ? total_route_distance / static_cast<double>(games) : 0.0;
}
double ConditionReport::mean_questionnaire(std::size_t item) const {
  return questionnaire_count ? questionnaire_sums[item] / static_cast<double>(questionnaire_count) : 0.0;
}

Report build_report(const Dataset& ds, const MetricOptions& opts) {
  std::map<std::string, ConditionReport> by_name;
  Report r;
  r.all.condition = "All";
  for (const auto& s : ds.sessions) {
    auto name = s.condition.name();
    auto& c = by_name[name];
    c.condition = name;
    c.add_session(s, opts);
    r.all.add_session(s, opts);
  }
  for (auto kind : kAllStrategies) {
    auto it = by_name.find(std::string(to_string(kind)));
    if (it == by_name.end()) continue;
    r.conditions.push_back(std::move(it->second));
    by_name.erase(it);
  }
  for (auto& [name, c] : by_name) r.conditions.push_back(std::move(c));
  return r;
}

namespace {

std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

struct Row {
  std::string section;  // non-empty: a heading line before the row
  std::string label;
  std::function<std::string(const ConditionReport&)> cell;
};

std::vector<Row> rows() {
  auto pct = [](Label l) {
    return [l](const ConditionReport& c) { return fixed(100.0 * c.dialog.fraction(l), 1); };
  };
  auto np = [](MixedNpClass k) {
    return [k](const ConditionReport& c) { return std::to_string(c.dialog.np_counts[k]); };
  };
  auto q = [](std::size_t i) { return [i](const ConditionReport& c) { return fixed(c.mean_questionnaire(i), 1); }; };
  return {
      {"Dialog Metrics", "# Dialogs", [](const ConditionReport& c) { return std::to_string(c.dialog.n_dialogs); }},
      {"", "Mean # Utts/Dialog", [](const ConditionReport& c) { return fixed(c.dialog.mean_utterances_per_dialog(), 1); }},
      {"", "Mean # Tokens/Utt", [](const ConditionReport& c) { return fixed(c.dialog.mean_tokens_per_utterance(), 1); }},
      {"", "% Eng", pct(Label::english)},
      {"", "% Spa", pct(Label::spanish)},
      {"", "% Mixed", pct(Label::mixed)},
      {"", "% None", pct(Label::none)},
      {"", "% IS", [](const ConditionReport& c) { return fixed(100.0 * c.dialog.intersentential.rate(), 1); }},
      {"", "% IS Entrainment", [](const ConditionReport& c) { return fixed(100.0 * c.dialog.entrainment.rate(), 1); }},
      {"Task Success Metrics", "% Games Complete", [](const ConditionReport& c) { return fixed(c.percent_complete(), 1); }},
      {"", "Game Time (sec.)", [](const ConditionReport& c) { return fixed(c.mean_game_time_s(), 1); }},
      {"", "Route Distance", [](const ConditionReport& c) { return fixed(c.mean_route_distance(), 2); }},
      {"", "Task Enjoy (0-100)", q(0)},
      {"", "Task Success (0-100)", q(1)},
      {"", "Diff. Comm. (0-100)", q(2)},
      {"", "Diff. Ins. (0-100)", q(3)},
      {"NP Switches", "# Fem. Cong. NPs", np(MixedNpClass::congruent_fem)},
      {"", "# Fem. Incong. NPs", np(MixedNpClass::incongruent_fem)},
      {"", "# Masc. Cong. NPs", np(MixedNpClass::congruent_masc)},
      {"", "# Masc. Incong. NPs", np(MixedNpClass::incongruent_masc)},
      {"", "Total # Mixed NPs", [](const ConditionReport& c) { return std::to_string(c.dialog.np_counts.total()); }},
      {"", "# Ambiguous NPs (excluded)", np(MixedNpClass::ambiguous)},
  };
}

std::string pad_left(const std::string& s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; }
std::string pad_right(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace

std::string render_report_text(const Report& r) {
  std::vector<const ConditionReport*> cols;
  for (const auto& c : r.conditions) cols.push_back(&c);
  cols.push_back(&r.all);
  auto table = rows();
  std::size_t label_w = 0;
  for (const auto& row : table) label_w = std::max(label_w, row.label.size() + 2);
  std::vector<std::size_t> widths;
  for (const auto* c : cols) widths.push_back(std::max<std::size_t>(c->condition.size(), 8) + 2);

  std::string out = pad_right("", label_w);
  for (std::size_t i = 0; i < cols.size(); ++i) out += pad_left(cols[i]->condition, widths[i]);
  out += '\n';
  for (const auto& row : table) {
    if (!row.section.empty()) out += row.section + '\n';
    out += pad_right("  " + row.label, label_w);
    for (std::size_t i = 0; i < cols.size(); ++i) out += pad_left(row.cell(*cols[i]), widths[i]);
    out += '\n';
  }
  return out;
}

namespace {

json condition_json(const ConditionReport& c) {
  json np;
  for (auto k : kAllNpClasses) np[std::string(to_string(k))] = c.dialog.np_counts[k];
  np["total"] = c.dialog.np_counts.total();
  return {{"condition", c.condition},
          {"n_sessions", c.n_sessions},
          {"n_dialogs", c.dialog.n_dialogs},
          {"n_utterances", c.dialog.n_utterances},
          {"n_tokens", c.dialog.n_tokens},
          {"mean_utterances_per_dialog", c.dialog.mean_utterances_per_dialog()},
          {"mean_tokens_per_utterance", c.dialog.mean_tokens_per_utterance()},
          {"percent_english", 100.0 * c.dialog.fraction(Label::english)},
          {"percent_spanish", 100.0 * c.dialog.fraction(Label::spanish)},
          {"percent_mixed", 100.0 * c.dialog.fraction(Label::mixed)},
          {"percent_none", 100.0 * c.dialog.fraction(Label::none)},
          {"intersentential", {{"hits", c.dialog.intersentential.hits}, {"eligible", c.dialog.intersentential.eligible},
                               {"percent", 100.0 * c.dialog.intersentential.rate()}}},
          {"entrainment", {{"hits", c.dialog.entrainment.hits}, {"eligible", c.dialog.entrainment.eligible},
                           {"percent", 100.0 * c.dialog.entrainment.rate()}}},
          {"games", c.games},
          {"games_completed", c.games_completed},
          {"percent_games_complete", c.percent_complete()},
          {"mean_game_time_s", c.mean_game_time_s()},
          {"mean_route_distance", c.mean_route_distance()},
          {"questionnaire", {{"responses", c.questionnaire_count},
                             {"task_enjoy", c.mean_questionnaire(0)},
                             {"task_success", c.mean_questionnaire(1)},
                             {"difficult_comm", c.mean_questionnaire(2)},
                             {"difficult_ins", c.mean_questionnaire(3)}}},
          {"np_switches", std::move(np)}};
}

}  // namespace

json report_to_json(const Report& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) conds.push_back(condition_json(c));
  return {{"dataset_version", kDatasetVersion}, {"conditions", std::move(conds)}, {"all", condition_json(r.all)}};
}

}  // namespace mapcs
