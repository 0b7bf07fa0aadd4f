#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace mapcs::util {

/// File missing, unreadable or unwritable.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Non-empty lines with '#' comment lines dropped and trailing '\r' removed.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace mapcs::util
