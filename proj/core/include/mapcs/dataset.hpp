#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapcs/session_log.hpp"
#include "mapcs/store.hpp"

namespace mapcs {

inline constexpr std::string_view kDatasetSchema = "mapcs.dataset";
inline constexpr int kDatasetVersion = 1;

/// Unsupported schema name or version.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(int found, const std::string& message) : std::runtime_error(message), found_(found) {}
  int found_version() const { return found_; }

 private:
  int found_;
};

/// Structurally broken dataset file.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExportFilter {
  std::vector<std::string> conditions;   // condition names; empty keeps all
  std::vector<std::string> session_ids;  // empty keeps all
  bool keeps(const Session& s) const;
};

struct ExportSummary {
  std::size_t sessions = 0;
  std::size_t skipped_unfinished = 0;
  std::size_t records = 0;
};

/// JSON Lines: a header record, then per session (ordered by id) each game's
/// utterance records followed by its game record, then the session record.
/// Sessions that have not finished are skipped with a warning.
ExportSummary export_dataset(const SessionStore& store, const ReplayContext& ctx, std::ostream& out,
                             const ExportFilter& filter = {});
ExportSummary export_sessions(std::vector<Session> sessions, std::ostream& out, const ExportFilter& filter = {});

nlohmann::json dataset_header(std::size_t n_sessions);

struct Dataset {
  int version = kDatasetVersion;
  std::vector<Session> sessions;  // rebuilt from the records, in file order
};

/// Throws SchemaError for another schema or version and DatasetError for
/// malformed records.
Dataset read_dataset(std::istream& in);
Dataset read_dataset_file(const std::string& path);

/// Every structural problem found, as "line N: ..." strings. Empty means the
/// file is valid.
std::vector<std::string> validate_dataset(std::istream& in);

}  // namespace mapcs
