#include "mapcs/store.hpp"

#include <fstream>

namespace mapcs {

namespace fs = std::filesystem;

namespace {

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

void MemorySessionStore::create(const Event& created) {
  std::lock_guard lock(mu_);
  if (logs_.count(created.session_id)) throw StoreError("session exists: " + created.session_id);
  order_.push_back(created.session_id);
  logs_[created.session_id].push_back(created);
}

void MemorySessionStore::append(const std::string& session_id, const Event& e) {
  std::lock_guard lock(mu_);
  auto it = logs_.find(session_id);
  if (it == logs_.end()) throw StoreError("unknown session: " + session_id);
  it->second.push_back(e);
}

std::vector<Event> MemorySessionStore::load(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto it = logs_.find(session_id);
  if (it == logs_.end()) throw StoreError("unknown session: " + session_id);
  return it->second;
}

std::vector<std::string> MemorySessionStore::list() const {
  std::lock_guard lock(mu_);
  return order_;
}

FileSessionStore::FileSessionStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "sessions", ec);
  if (ec) throw StoreError("cannot create " + (root_ / "sessions").string() + ": " + ec.message());
}

fs::path FileSessionStore::log_path(const std::string& session_id) const {
  if (!valid_id(session_id)) throw StoreError("invalid session id '" + session_id + "'");
  return root_ / "sessions" / (session_id + ".jsonl");
}

std::mutex& FileSessionStore::lock_for(const std::string& session_id) const {
  std::lock_guard lock(locks_mu_);
  auto& slot = locks_[session_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

void FileSessionStore::write_line(const fs::path& p, const std::string& line) const {
  std::ofstream out(p, std::ios::app | std::ios::binary);
  if (!out) throw StoreError("cannot open " + p.string());
  out << line << '\n';
  out.flush();
  if (!out) throw StoreError("write failed: " + p.string());
}

void FileSessionStore::create(const Event& created) {
  auto path = log_path(created.session_id);
  std::lock_guard index_lock(index_mu_);
  if (fs::exists(path)) throw StoreError("session exists: " + created.session_id);
  {
    std::lock_guard lock(lock_for(created.session_id));
    write_line(path, created.to_json().dump());
  }
  nlohmann::json idx = {{"session_id", created.session_id}, {"condition", created.condition.name()}};
  write_line(root_ / "index.jsonl", idx.dump());
}

void FileSessionStore::append(const std::string& session_id, const Event& e) {
  auto path = log_path(session_id);
  std::lock_guard lock(lock_for(session_id));
  if (!fs::exists(path)) throw StoreError("unknown session: " + session_id);
  write_line(path, e.to_json().dump());
}

std::vector<Event> FileSessionStore::load(const std::string& session_id) const {
  auto path = log_path(session_id);
  std::lock_guard lock(lock_for(session_id));
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("unknown session: " + session_id);
  std::vector<Event> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(Event::from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw StoreError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> FileSessionStore::list() const {
  std::lock_guard lock(index_mu_);
  std::vector<std::string> out;
  std::ifstream in(root_ / "index.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line).at("session_id").get<std::string>());
    } catch (const std::exception& e) {
      throw StoreError("corrupt index line: " + line);
    }
  }
  return out;
}

}  // namespace mapcs
