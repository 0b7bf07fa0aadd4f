#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace mapcs::util {

struct TsvRow {
  std::size_t line;  // 1-based
  std::vector<std::string> fields;
};

/// Tab-separated rows; blank lines and lines starting with '#' are skipped.
std::vector<TsvRow> read_tsv(const std::filesystem::path& path);
std::vector<TsvRow> parse_tsv(std::string_view text);

}  // namespace mapcs::util
