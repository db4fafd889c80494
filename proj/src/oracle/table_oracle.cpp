#include "rewardkit/oracle/table_oracle.hpp"

#include <set>

namespace rewardkit {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Less:
      return "strictly-less";
    case Verdict::Indifferent:
      return "indifferent";
    case Verdict::Greater:
      return "strictly-greater";
    case Verdict::Unanswered:
      return "unanswered";
  }
  return "unanswered";
}

Verdict parse_verdict(std::string_view text) {
  if (text == "strictly-less" || text == "less" || text == "<") return Verdict::Less;
  if (text == "indifferent" || text == "~") return Verdict::Indifferent;
  if (text == "strictly-greater" || text == "greater" || text == ">") return Verdict::Greater;
  if (text == "unanswered") return Verdict::Unanswered;
  throw std::invalid_argument("unknown verdict '" + std::string(text) + "'");
}

Verdict flip(Verdict v) {
  switch (v) {
    case Verdict::Less:
      return Verdict::Greater;
    case Verdict::Greater:
      return Verdict::Less;
    default:
      return v;
  }
}

TableOracle::TableOracle(Alphabet alphabet, const std::vector<PreferenceEntry>& entries)
    : PreferenceOracle(std::move(alphabet)) {
  auto insert = [&](const Lottery& a, const Lottery& b, Verdict v) {
    auto [it, inserted] = table_.try_emplace({a, b}, v);
    if (!inserted && it->second != v) throw std::invalid_argument("contradictory preference table entries");
  };
  for (const auto& e : entries) {
    if (e.verdict == Verdict::Unanswered) throw std::invalid_argument("table entries must carry a verdict");
    if (e.lhs == e.rhs && e.verdict != Verdict::Indifferent)
      throw std::invalid_argument("strict preference of a lottery over itself");
    e.lhs.require_alphabet(this->alphabet());
    e.rhs.require_alphabet(this->alphabet());
    insert(e.lhs, e.rhs, e.verdict);
    insert(e.rhs, e.lhs, flip(e.verdict));
  }
}

std::vector<Lottery> TableOracle::lotteries() const {
  std::set<Lottery> seen;
  for (const auto& [key, v] : table_) {
    seen.insert(key.first);
    seen.insert(key.second);
  }
  return {seen.begin(), seen.end()};
}

Verdict TableOracle::evaluate(const Lottery& a, const Lottery& b) {
  if (a == b) return Verdict::Indifferent;
  auto it = table_.find({a, b});
  if (it == table_.end()) throw OutOfTable("preference table has no entry for this pair");
  return it->second;
}

ReplayOracle::ReplayOracle(Alphabet alphabet, std::vector<LoggedAnswer> log)
    : PreferenceOracle(std::move(alphabet)), log_(std::move(log)) {}

Verdict ReplayOracle::evaluate(const Lottery& a, const Lottery& b) {
  if (pending_) return Verdict::Unanswered;
  if (position_ >= log_.size()) {
    pending_.emplace(a, b);
    return Verdict::Unanswered;
  }
  const auto& entry = log_[position_];
  if (!(entry.lhs == a && entry.rhs == b))
    throw ReplayDivergence("answer log entry " + std::to_string(position_) + " does not match the replayed query");
  ++position_;
  return entry.verdict;
}

}  // namespace rewardkit
