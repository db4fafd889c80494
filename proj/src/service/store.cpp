#include "rewardkit/service/store.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>

namespace rewardkit::service {

std::string utc_timestamp() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto t = system_clock::to_time_t(now);
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

Json answer_response(const Session& s) {
  Json j = {{"id", s.id()}, {"status", std::string(to_string(s.status()))}};
  switch (s.status()) {
    case SessionStatus::AwaitingAnswer: j["pending_query"] = s.pending_json(); break;
    case SessionStatus::Complete: j["result"] = s.result(); break;
    case SessionStatus::Inconsistent: j["inconsistency"] = s.result()["inconsistencies"][0]; break;
    default: j["error"] = s.error(); break;
  }
  return j;
}

SessionStore::SessionStore(std::optional<std::filesystem::path> data_dir) : dir_(std::move(data_dir)) {
  if (dir_) std::filesystem::create_directories(*dir_);
}

namespace {

/// Parsed records plus the byte length of the intact prefix.
std::pair<std::vector<LogRecord>, std::uintmax_t> parse_log(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open session log " + file.string());
  std::vector<LogRecord> out;
  std::uintmax_t good = 0;
  std::string line;
  while (std::getline(in, line)) {
    const bool terminated = !in.eof();
    Json j = line.empty() ? Json() : Json::parse(line, nullptr, false);
    // Only the last line can be torn; anything after it means corruption.
    if (j.is_discarded() || !terminated) {
      if (in.peek() != EOF) throw std::runtime_error("corrupt record inside session log " + file.string());
      break;
    }
    if (!line.empty()) out.push_back(log_record_from_json(j));
    good += line.size() + 1;
  }
  return {std::move(out), good};
}

}  // namespace

std::vector<LogRecord> SessionStore::read_log(const std::filesystem::path& file) { return parse_log(file).first; }

std::size_t SessionStore::load() {
  if (!dir_) return 0;
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(*dir_)) {
    if (e.path().extension() != ".jsonl") continue;
    const auto id = e.path().stem().string();
    auto [records, good] = parse_log(e.path());
    if (good != std::filesystem::file_size(e.path())) std::filesystem::resize_file(e.path(), good);
    auto session = Session::restore(id, records);
    std::lock_guard lock(mu_);
    sessions_[id] = std::make_shared<Entry>(std::move(session));
    ++n;
  }
  return n;
}

std::string SessionStore::new_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

void SessionStore::append(const Session& s, const LogRecord& r) const {
  if (!dir_) return;
  std::ofstream out(*dir_ / (s.id() + ".jsonl"), std::ios::app);
  out << to_json(r).dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("failed to append to session log for " + s.id());
}

void SessionStore::cache_result(const Session& s) const {
  if (!dir_) return;
  if (s.status() != SessionStatus::Complete && s.status() != SessionStatus::Inconsistent) {
    std::filesystem::remove(*dir_ / (s.id() + ".result.json"));
    return;
  }
  const auto tmp = *dir_ / (s.id() + ".result.json.tmp");
  {
    std::ofstream out(tmp);
    out << s.result().dump(2) << '\n';
  }
  std::filesystem::rename(tmp, *dir_ / (s.id() + ".result.json"));
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionNotFound("no session '" + id + "'");
  return it->second;
}

Json SessionStore::create(SessionConfig config, std::optional<std::string> id) {
  std::string sid;
  {
    std::lock_guard lock(mu_);
    do sid = id ? *id : new_id();
    while (!id && sessions_.count(sid));
    if (sessions_.count(sid)) throw std::invalid_argument("session '" + sid + "' already exists");
  }
  for (char c : sid)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
      throw std::invalid_argument("session ids are alphanumeric");
  auto session = Session::create(sid, std::move(config), utc_timestamp());
  append(session, session.log().front());
  cache_result(session);
  Json j = {{"id", sid}, {"status", std::string(to_string(session.status()))}, {"pending_query", session.pending_json()}};
  std::lock_guard lock(mu_);
  sessions_[sid] = std::make_shared<Entry>(std::move(session));
  return j;
}

Json SessionStore::view(const std::string& id) const {
  auto e = find(id);
  std::lock_guard lock(e->mu);
  return e->session.view();
}

Json SessionStore::answer(const std::string& id, Verdict v) {
  auto e = find(id);
  std::lock_guard lock(e->mu);
  const auto& r = e->session.answer(v, utc_timestamp());
  append(e->session, r);
  cache_result(e->session);
  return answer_response(e->session);
}

Json SessionStore::requery(const std::string& id, std::optional<std::uint64_t> seq) {
  auto e = find(id);
  std::lock_guard lock(e->mu);
  const auto& r = e->session.requery(seq, utc_timestamp());
  append(e->session, r);
  cache_result(e->session);
  return answer_response(e->session);
}

Json SessionStore::result(const std::string& id) const {
  auto e = find(id);
  std::lock_guard lock(e->mu);
  return e->session.result();
}

std::vector<std::string> SessionStore::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : sessions_) out.push_back(k);
  return out;
}

}  // namespace rewardkit::service
