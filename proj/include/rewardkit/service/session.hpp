#pragma once

// Elicitation session: a human answers the design pipeline's comparisons one
// at a time. The session owns only its answer log; every state is rebuilt by
// replaying the effective answers through design_reward, so a log prefix
// always reproduces the same next query.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rewardkit/design/design.hpp"
#include "rewardkit/lottery/json.hpp"
#include "rewardkit/oracle/table_oracle.hpp"

namespace rewardkit::service {

enum class SessionStatus { AwaitingAnswer, Computing, Complete, Inconsistent, Failed };

/// "awaiting-answer" | "computing" | "complete" | "inconsistent" | "failed"
std::string_view to_string(SessionStatus s);

/// Request that does not fit the session's state (answer after completion, result while awaiting, ...).
class SessionStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SessionConfig {
  Alphabet alphabet;
  double epsilon = 1e-6;
  std::optional<std::uint64_t> query_budget;
};

/// One line of the append-only session log.
struct LogRecord {
  enum class Kind { Create, Answer, Retract };
  Kind kind = Kind::Answer;
  std::uint64_t seq = 0;
  std::string timestamp;
  // Create
  std::optional<SessionConfig> config;
  // Answer
  std::optional<Lottery> lhs, rhs;
  Verdict verdict = Verdict::Unanswered;
  // Retract: seq of the withdrawn answer (later answers are withdrawn with it)
  std::uint64_t retracts = 0;
};

Json to_json(const LogRecord& r);
LogRecord log_record_from_json(const Json& j);

struct Inconsistency {
  std::string kind;  // "transitivity-cycle" | "continuity" | "discount-range" | "not-markov"
  std::string message;
  axiom::Witness witness;
  /// Answer whose retraction re-opens the session (seq), if any.
  std::optional<std::uint64_t> requery_seq;
};

/// Serialized session result: {"spec", "diagnostics"} plus "inconsistencies".
Json session_result_json(const std::optional<design::DesignResult>& design, const std::vector<Inconsistency>& found,
                         const Alphabet& alphabet);

/// Smallest cycle with a strict step among the answers, if any. `seqs` aligns with `answers`.
std::optional<Inconsistency> find_transitivity_cycle(const std::vector<LoggedAnswer>& answers,
                                                     const std::vector<std::uint64_t>& seqs);

class Session {
 public:
  /// Validates the config, writes the create record and computes the first query.
  /// Throws design::QueryBudgetExceeded for a zero budget, std::invalid_argument for an empty alphabet.
  static Session create(std::string id, SessionConfig config, std::string timestamp = {});
  /// Rebuilds a session from its log (first record must be Create).
  static Session restore(std::string id, const std::vector<LogRecord>& log);

  const std::string& id() const { return id_; }
  const SessionConfig& config() const { return config_; }
  SessionStatus status() const { return status_; }
  const std::optional<std::pair<Lottery, Lottery>>& pending() const { return pending_; }
  const std::vector<LogRecord>& log() const { return log_; }
  std::size_t answered() const { return effective_.size(); }

  /// Appends the answer and advances; returns the new log record.
  const LogRecord& answer(Verdict v, std::string timestamp = {});
  /// Withdraws an answer of an inconsistent session, together with every answer
  /// given after it, and re-opens its query. Defaults to the inconsistency's
  /// requery_seq; any active answer (e.g. another step of a cycle) may be named.
  const LogRecord& requery(std::optional<std::uint64_t> seq = std::nullopt, std::string timestamp = {});

  /// Throws SessionStateError unless complete or inconsistent.
  Json result() const;
  const std::optional<design::DesignResult>& design_result() const { return design_; }
  const std::optional<Inconsistency>& inconsistency() const { return inconsistency_; }
  const std::string& error() const { return error_; }

  /// Pending query with lotteries in the lottery-core schema plus a readable rendering.
  Json pending_json() const;
  /// Full view: id, status, config, answer count, pending query, result or inconsistency.
  Json view() const;

 private:
  Session() = default;
  void rebuild();
  void advance();

  std::string id_;
  SessionConfig config_;
  std::vector<LogRecord> log_;
  std::vector<LoggedAnswer> effective_;
  std::vector<std::uint64_t> effective_seq_;
  SessionStatus status_ = SessionStatus::Computing;
  std::optional<std::pair<Lottery, Lottery>> pending_;
  std::optional<design::DesignResult> design_;
  std::optional<Inconsistency> inconsistency_;
  std::string error_;
};

/// Readable rendering of a lottery: [{"outcome": "a · b", "odds": "66.67%", "weight": "2/3"}].
Json render_lottery(const Lottery& l, const Alphabet& alphabet);

}  // namespace rewardkit::service
