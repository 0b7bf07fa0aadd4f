// mapcs: batch tooling over resources, simulations and exported datasets.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "mapcs/dataset.hpp"
#include "mapcs/dtw.hpp"
#include "mapcs/oracle/dtw_enumerate.hpp"
#include "mapcs/report.hpp"
#include "mapcs/simulate.hpp"
#include "mapcs/store.hpp"

#ifndef MAPCS_DEFAULT_RESOURCE_DIR
#define MAPCS_DEFAULT_RESOURCE_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace mapcs;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIoError = 2;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_resources() {
  if (const char* env = std::getenv("MAPCS_RESOURCES"); env && *env) return env;
  return MAPCS_DEFAULT_RESOURCE_DIR;
}

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw IoFailure("cannot read " + p.string());
}

void require_dir(const fs::path& p) {
  if (!fs::is_directory(p)) throw IoFailure("no such directory " + p.string());
}

// Writes to `path`, or stdout for "-" / empty.
template <class Fn>
void write_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write " + path);
  fn(out);
  if (!out) throw IoFailure("write failed: " + path);
}

// ---- validate -------------------------------------------------------------

struct ValidateArgs {
  std::string resources = default_resources();
  bool check_resources = false;
  std::string dataset;
  bool dump_determiners = false;
};

int validate_resources(const fs::path& dir) {
  for (const char* sub : {"lexicon/nouns.tsv", "lexicon/english_gender.tsv", "translator/phrases.tsv",
                          "agent/welcome.txt", "prompts/instructor.txt", "prompts/navigator.txt"}) {
    require_file(dir / sub);
  }
  require_dir(dir / "maps");
  int problems = 0;
  auto report = [&](const std::string& what) {
    std::cout << "error: " << what << "\n";
    ++problems;
  };
  try {
    auto analyzer = std::make_shared<TextAnalyzer>(TextAnalyzer::load(dir));
    const auto& lex = analyzer->lexicon();
    std::cout << "lexicon: " << lex.nouns().size() << " nouns, " << lex.english_genders().size()
              << " english gender entries\n";
    for (const auto& gap : lex.coverage_gaps()) report("english noun '" + gap + "' has no gender entry");
    try {
      auto maps = MapCatalog::load_dir(dir / "maps", &lex);
      std::cout << "maps: " << maps.size() << "\n";
      if (maps.size() < 4) report("need at least 4 maps, found " + std::to_string(maps.size()));
    } catch (const std::exception& e) {
      report(e.what());
    }
    try {
      auto tr = PhraseTableTranslator::load(dir / "translator" / "phrases.tsv", analyzer->shared_lexicon());
      std::cout << "phrase table: ok\n";
    } catch (const std::exception& e) {
      report(e.what());
    }
    try {
      auto w = WelcomeMessages::load(dir / "agent" / "welcome.txt");
      std::cout << "welcome lines: " << w.pool().size() << "\n";
    } catch (const std::exception& e) {
      report(e.what());
    }
    try {
      PromptTemplates::load(dir / "prompts");
      std::cout << "prompts: ok\n";
    } catch (const std::exception& e) {
      report(e.what());
    }
  } catch (const std::exception& e) {
    report(e.what());
  }
  return problems == 0 ? kOk : kInvalid;
}

int validate_dataset_file(const std::string& path) {
  require_file(path);
  std::ifstream in(path, std::ios::binary);
  auto errors = validate_dataset(in);
  for (const auto& e : errors) std::cout << path << ": " << e << "\n";
  if (errors.empty()) std::cout << path << ": valid\n";
  return errors.empty() ? kOk : kInvalid;
}

void dump_determiners() {
  const auto& t = DeterminerTable::standard();
  std::cout << "determiner\tgender\tmasculine\tfeminine\n";
  std::vector<std::string> dets;
  for (const auto& [d, _] : t.to_feminine()) dets.push_back(d);
  for (const auto& [d, _] : t.to_masculine()) {
    if (std::find(dets.begin(), dets.end(), d) == dets.end()) dets.push_back(d);
  }
  std::sort(dets.begin(), dets.end());
  for (const auto& d : dets) {
    auto g = t.gender_of(d);
    std::cout << d << "\t" << (g ? std::string(to_string(*g)) : "-") << "\t" << t.to_gender(d, Gender::masculine)
              << "\t" << t.to_gender(d, Gender::feminine) << "\n";
  }
}

int run_validate(const ValidateArgs& a) {
  int rc = kOk;
  if (a.dump_determiners) dump_determiners();
  if (a.check_resources || (a.dataset.empty() && !a.dump_determiners)) {
    rc = std::max(rc, validate_resources(a.resources));
  }
  if (!a.dataset.empty()) rc = std::max(rc, validate_dataset_file(a.dataset));
  return rc;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string resources = default_resources();
  std::string conditions = "all";
  int sessions = 10;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string questionnaire = "once";
  std::string data_dir;
  int stall_game = -1;
};

int run_simulate(const SimulateArgs& a) {
  SimulationOptions opts;
  try {
    opts.conditions = parse_condition_list(a.conditions);
  } catch (const std::exception& e) {
    std::cerr << "mapcs simulate: " << e.what() << "\n";
    return kIoError;
  }
  auto mode = parse_questionnaire_mode(a.questionnaire);
  if (!mode) {
    std::cerr << "mapcs simulate: unknown questionnaire mode '" << a.questionnaire << "'\n";
    return kIoError;
  }
  opts.n_sessions = a.sessions;
  opts.seed = a.seed;
  opts.questionnaire_mode = *mode;
  opts.human.stall_game = a.stall_game;
  require_dir(a.resources);

  auto resources = load_scripted_resources(a.resources, derive_seed(a.seed, "bot"));
  std::unique_ptr<SessionStore> store;
  if (a.data_dir.empty()) {
    store = std::make_unique<MemorySessionStore>();
  } else {
    store = std::make_unique<FileSessionStore>(a.data_dir);
  }
  auto t0 = std::chrono::steady_clock::now();
  auto ids = simulate(resources, opts, *store);
  ReplayContext ctx{*resources.analyzer, *resources.maps};
  ExportSummary summary;
  write_output(a.out, [&](std::ostream& os) { summary = export_dataset(*store, ctx, os); });
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "simulated %zu sessions (%zu exported, %zu records) in %.2fs\n", ids.size(), summary.sessions,
               summary.records, secs);
  return kOk;
}

// ---- report ---------------------------------------------------------------

struct ReportArgs {
  std::string in;
  std::string format = "text";
  std::string out = "-";
  bool skip_mixed_none = false;
};

int run_report(const ReportArgs& a) {
  require_file(a.in);
  Dataset ds;
  try {
    ds = read_dataset_file(a.in);
  } catch (const SchemaError& e) {
    std::cerr << "mapcs report: " << e.what() << "\n";
    return kInvalid;
  } catch (const DatasetError& e) {
    std::cerr << "mapcs report: " << e.what() << "\n";
    return kInvalid;
  }
  MetricOptions opts;
  opts.skip_mixed_none = a.skip_mixed_none;
  auto report = build_report(ds, opts);
  write_output(a.out, [&](std::ostream& os) {
    if (a.format == "json") {
      os << report_to_json(report).dump(2) << "\n";
    } else {
      os << render_report_text(report);
    }
  });
  return kOk;
}

// ---- dtw-oracle -----------------------------------------------------------

struct OracleArgs {
  int width = 4;
  int height = 4;
  int max_cells = 6;
};

int run_dtw_oracle(const OracleArgs& a) {
  if (a.width < 1 || a.height < 1 || a.max_cells < 1 || a.max_cells > 8) {
    std::cerr << "mapcs dtw-oracle: grid sides must be positive and --max-cells in 1..8\n";
    return kIoError;
  }
  auto t0 = std::chrono::steady_clock::now();
  auto r = oracle::sweep_grid_paths(a.width, a.height, static_cast<std::size_t>(a.max_cells),
                                    [](const std::vector<Cell>& x, const std::vector<Cell>& y) {
                                      return dtw_route_distance(x, y).raw_dtw_cost;
                                    });
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("grid %dx%d, paths of 1..%d cells: %zu paths, %llu pairs, %llu mismatches, %llu nonzero self-scores (%.1fs)\n",
              a.width, a.height, a.max_cells, r.paths, static_cast<unsigned long long>(r.pairs),
              static_cast<unsigned long long>(r.mismatches), static_cast<unsigned long long>(r.identical_nonzero),
              secs);
  if (r.mismatches > 0) {
    auto show = [](const std::vector<Cell>& p) {
      std::string s;
      for (auto c : p) s += "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
      return s;
    };
    std::printf("first mismatch: %s vs %s\n", show(r.first_a).c_str(), show(r.first_b).c_str());
  }
  return r.mismatches == 0 && r.identical_nonzero == 0 ? kOk : kInvalid;
}

// ---- replay / export over a data directory --------------------------------

struct StoreArgs {
  std::string resources = default_resources();
  std::string data_dir;
  std::string session;
  std::string conditions;
  std::string out = "-";
};

int run_replay(const StoreArgs& a) {
  require_dir(a.data_dir);
  auto resources = load_scripted_resources(a.resources);
  ReplayContext ctx{*resources.analyzer, *resources.maps};
  FileSessionStore store(a.data_dir);
  std::vector<std::string> ids = a.session.empty() ? store.list() : std::vector<std::string>{a.session};
  int failures = 0;
  write_output(a.out, [&](std::ostream& os) {
    for (const auto& id : ids) {
      std::vector<Event> log;
      try {
        log = store.load(id);
      } catch (const std::exception& e) {
        throw IoFailure(e.what());
      }
      try {
        auto s = replay(log, ctx);
        auto mismatches = audit_strategy(log, ctx, *resources.translator, resources.welcome->pool());
        for (const auto& m : mismatches) {
          std::cerr << id << ": event " << m.event_index << " recorded '" << m.recorded << "' expected '"
                    << m.expected << "'\n";
        }
        if (!mismatches.empty()) ++failures;
        os << session_to_json(s).dump() << "\n";
      } catch (const std::exception& e) {
        std::cerr << id << ": " << e.what() << "\n";
        ++failures;
      }
    }
  });
  return failures == 0 ? kOk : kInvalid;
}

int run_export(const StoreArgs& a) {
  require_dir(a.data_dir);
  auto resources = load_scripted_resources(a.resources);
  ReplayContext ctx{*resources.analyzer, *resources.maps};
  FileSessionStore store(a.data_dir);
  ExportFilter filter;
  if (!a.conditions.empty()) {
    for (const auto& c : parse_condition_list(a.conditions)) filter.conditions.push_back(c.name());
  }
  if (!a.session.empty()) filter.session_ids.push_back(a.session);
  ExportSummary summary;
  write_output(a.out, [&](std::ostream& os) { summary = export_dataset(store, ctx, os, filter); });
  std::fprintf(stderr, "exported %zu sessions (%zu unfinished skipped)\n", summary.sessions,
               summary.skipped_unfinished);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mapcs: resource validation, scripted simulation, reports and the DTW cross-check"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging on stderr");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check resource files and/or an exported dataset");
  validate->add_option("--resources", va.resources, "Resource directory")->capture_default_str();
  validate->add_flag("--check-resources", va.check_resources,
                     "Validate resources even when --dataset is given (default when nothing else is asked)");
  validate->add_option("--dataset", va.dataset, "Exported dataset (JSON Lines) to check against the schema");
  validate->add_flag("--dump-determiners", va.dump_determiners, "Print the determiner gender table as TSV");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Run scripted sessions in-process and export the dataset");
  sim->add_option("--resources", sa.resources, "Resource directory")->capture_default_str();
  sim->add_option("--conditions", sa.conditions, "Comma-separated condition specs, or 'all'")->capture_default_str();
  sim->add_option("--sessions", sa.sessions, "Sessions per condition")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  sim->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
  sim->add_option("--out,-o", sa.out, "Dataset path, '-' for stdout")->capture_default_str();
  sim->add_option("--questionnaire", sa.questionnaire, "once | per_game")->capture_default_str();
  sim->add_option("--data-dir", sa.data_dir, "Keep the event logs in this directory instead of memory");
  sim->add_option("--stall-game", sa.stall_game, "Game index in which the scripted human goes silent");

  ReportArgs ra;
  auto* rep = app.add_subcommand("report", "Descriptive statistics per condition from a dataset");
  rep->add_option("--in,-i", ra.in, "Dataset path")->required();
  rep->add_option("--format", ra.format, "text | json")->capture_default_str()->check(CLI::IsMember({"text", "json"}));
  rep->add_option("--out,-o", ra.out, "Output path, '-' for stdout")->capture_default_str();
  rep->add_flag("--skip-mixed-none", ra.skip_mixed_none,
                "Drop mixed/none utterances before pairing for the inter-sentential rates");

  OracleArgs oa;
  auto* dtw = app.add_subcommand("dtw-oracle", "Compare route DTW against warping-path enumeration on all grid paths");
  dtw->add_option("--width", oa.width, "Grid width")->capture_default_str();
  dtw->add_option("--height", oa.height, "Grid height")->capture_default_str();
  dtw->add_option("--max-cells", oa.max_cells, "Longest path, in cells")->capture_default_str();

  StoreArgs ya;
  auto* rpl = app.add_subcommand("replay", "Replay stored event logs, audit bot lines, print session snapshots");
  rpl->add_option("--resources", ya.resources, "Resource directory")->capture_default_str();
  rpl->add_option("--data-dir", ya.data_dir, "Server data directory")->required();
  rpl->add_option("--session", ya.session, "Only this session id");
  rpl->add_option("--out,-o", ya.out, "Output path, '-' for stdout")->capture_default_str();

  StoreArgs xa;
  auto* exp = app.add_subcommand("export", "Export finished sessions from a data directory");
  exp->add_option("--resources", xa.resources, "Resource directory")->capture_default_str();
  exp->add_option("--data-dir", xa.data_dir, "Server data directory")->required();
  exp->add_option("--conditions", xa.conditions, "Keep only these conditions");
  exp->add_option("--session", xa.session, "Keep only this session id");
  exp->add_option("--out,-o", xa.out, "Dataset path, '-' for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kIoError;
  }
  spdlog::set_default_logger(spdlog::stderr_logger_mt("mapcs"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (*validate) return run_validate(va);
    if (*sim) return run_simulate(sa);
    if (*rep) return run_report(ra);
    if (*dtw) return run_dtw_oracle(oa);
    if (*rpl) return run_replay(ya);
    if (*exp) return run_export(xa);
  } catch (const IoFailure& e) {
    std::cerr << "mapcs: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "mapcs: " << e.what() << "\n";
    return kIoError;
  }
  return kOk;
}
