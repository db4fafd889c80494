#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "rewardkit/oracle/oracle.hpp"

namespace rewardkit {

struct PreferenceEntry {
  Lottery lhs;
  Lottery rhs;
  Verdict verdict = Verdict::Indifferent;
};

/// Closed-world preference table. The symmetric counterpart of every entry and
/// reflexive indifference are derived; any other query throws OutOfTable.
class TableOracle final : public PreferenceOracle {
 public:
  /// Throws std::invalid_argument on contradictory entries or an "unanswered" verdict.
  TableOracle(Alphabet alphabet, const std::vector<PreferenceEntry>& entries);

  std::string kind() const override { return "preference-table"; }
  std::size_t entry_count() const { return table_.size(); }
  /// Lotteries mentioned by the table, ordered.
  std::vector<Lottery> lotteries() const;

 protected:
  Verdict evaluate(const Lottery& a, const Lottery& b) override;

 private:
  std::map<std::pair<Lottery, Lottery>, Verdict> table_;
};

struct LoggedAnswer {
  Lottery lhs;
  Lottery rhs;
  Verdict verdict = Verdict::Indifferent;
};

/// Human-designer adapter: answers queries by replaying an answer log in order.
/// The first query past the end of the log is recorded as pending and answered
/// with Verdict::Unanswered, as is every query after it.
class ReplayOracle final : public PreferenceOracle {
 public:
  ReplayOracle(Alphabet alphabet, std::vector<LoggedAnswer> log);

  std::string kind() const override { return "human-session"; }
  bool is_pure() const override { return false; }

  /// Query the pipeline is blocked on, if any.
  const std::optional<std::pair<Lottery, Lottery>>& pending() const { return pending_; }
  std::size_t consumed() const { return position_; }

 protected:
  Verdict evaluate(const Lottery& a, const Lottery& b) override;

 private:
  std::vector<LoggedAnswer> log_;
  std::size_t position_ = 0;
  std::optional<std::pair<Lottery, Lottery>> pending_;
};

/// Raised when a replayed log disagrees with the query sequence being rebuilt.
class ReplayDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rewardkit
