#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>

#include "rewardkit/service/session.hpp"

namespace rewardkit::service {

class SessionNotFound : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Sessions backed by one append-only JSONL log per session (<id>.jsonl) and a
/// cached result (<id>.result.json) once a session completes or turns
/// inconsistent. Without a data directory everything stays in memory.
///
/// Thread-safe: the map has its own lock and every session is serialized by a
/// per-session lock, so distinct sessions progress concurrently.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> data_dir = std::nullopt);

  /// Loads every <id>.jsonl in the data directory. A torn final line (crash
  /// mid-append) is dropped. Returns the number of sessions restored.
  std::size_t load();

  Json create(SessionConfig config, std::optional<std::string> id = std::nullopt);
  Json view(const std::string& id) const;
  Json answer(const std::string& id, Verdict v);
  Json requery(const std::string& id, std::optional<std::uint64_t> seq = std::nullopt);
  Json result(const std::string& id) const;
  std::vector<std::string> ids() const;

  /// Reads a session log file; used by load() and by crash tests.
  static std::vector<LogRecord> read_log(const std::filesystem::path& file);

 private:
  struct Entry {
    mutable std::mutex mu;
    Session session;
    explicit Entry(Session s) : session(std::move(s)) {}
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  void append(const Session& s, const LogRecord& r) const;
  void cache_result(const Session& s) const;
  std::string new_id();

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

/// Answer payload for POST /answer: status plus pending query, result or inconsistency.
Json answer_response(const Session& s);

/// Current UTC time, ISO 8601 with milliseconds.
std::string utc_timestamp();

}  // namespace rewardkit::service
