#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapcs/session_log.hpp"

namespace mapcs {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Append-only event logs keyed by session id. Appends to distinct sessions
/// may run concurrently.
class SessionStore {
 public:
  virtual ~SessionStore() = default;
  /// Registers a new session whose log starts with `created`.
  virtual void create(const Event& created) = 0;
  virtual void append(const std::string& session_id, const Event& e) = 0;
  virtual std::vector<Event> load(const std::string& session_id) const = 0;
  /// Session ids in creation order.
  virtual std::vector<std::string> list() const = 0;
};

class MemorySessionStore final : public SessionStore {
 public:
  void create(const Event& created) override;
  void append(const std::string& session_id, const Event& e) override;
  std::vector<Event> load(const std::string& session_id) const override;
  std::vector<std::string> list() const override;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> order_;
  std::map<std::string, std::vector<Event>> logs_;
};

/// <root>/sessions/<id>.jsonl, one event per line, plus <root>/index.jsonl
/// with one {"session_id", "condition"} line per created session.
class FileSessionStore final : public SessionStore {
 public:
  explicit FileSessionStore(std::filesystem::path root);

  void create(const Event& created) override;
  void append(const std::string& session_id, const Event& e) override;
  std::vector<Event> load(const std::string& session_id) const override;
  std::vector<std::string> list() const override;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path log_path(const std::string& session_id) const;
  void write_line(const std::filesystem::path& p, const std::string& line) const;

  std::filesystem::path root_;
  mutable std::mutex index_mu_;
  mutable std::mutex locks_mu_;
  mutable std::map<std::string, std::unique_ptr<std::mutex>> locks_;
  std::mutex& lock_for(const std::string& session_id) const;
};

}  // namespace mapcs
