#include "rewardkit/lottery/history.hpp"

#include <algorithm>

namespace rewardkit {

Alphabet::Alphabet(std::vector<std::string> observations, std::vector<std::string> actions)
    : observations_(std::move(observations)), actions_(std::move(actions)) {
  for (SymbolId o = 0; o < observations_.size(); ++o)
    for (SymbolId a = 0; a < actions_.size(); ++a) transitions_.push_back({o, a});
}

Alphabet::Alphabet(std::vector<std::string> observations, std::vector<std::string> actions,
                   std::vector<Transition> transitions)
    : observations_(std::move(observations)), actions_(std::move(actions)), transitions_(std::move(transitions)) {
  for (const auto& t : transitions_) {
    if (t.observation >= observations_.size())
      throw AlphabetMismatch("transition observation id out of range");
    if (t.action != kNoAction && t.action >= actions_.size())
      throw AlphabetMismatch("transition action id out of range");
  }
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
}

Alphabet Alphabet::designer(std::vector<std::string> observations) {
  std::vector<Transition> ts;
  for (SymbolId o = 0; o < observations.size(); ++o) ts.push_back({o, kNoAction});
  return Alphabet(std::move(observations), {}, std::move(ts));
}

bool Alphabet::contains(const Transition& t) const { return index_of(t).has_value(); }

std::optional<std::size_t> Alphabet::index_of(const Transition& t) const {
  auto it = std::lower_bound(transitions_.begin(), transitions_.end(), t);
  if (it == transitions_.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - transitions_.begin());
}

void Alphabet::require(const Transition& t) const {
  if (!contains(t))
    throw AlphabetMismatch("transition (" + std::to_string(t.observation) + "," +
                           (t.action == kNoAction ? std::string("-") : std::to_string(t.action)) +
                           ") is not in the alphabet");
}

std::string Alphabet::name(const Transition& t) const {
  std::string o = t.observation < observations_.size() ? observations_[t.observation]
                                                        : "o" + std::to_string(t.observation);
  if (t.action == kNoAction) return o;
  std::string a = t.action < actions_.size() ? actions_[t.action] : "a" + std::to_string(t.action);
  return o + "/" + a;
}

Transition Alphabet::parse_name(const std::string& name) const {
  for (const auto& t : transitions_)
    if (this->name(t) == name) return t;
  throw AlphabetMismatch("unknown transition name '" + name + "'");
}

History History::prepended(const Transition& t) const {
  std::vector<Transition> out;
  out.reserve(steps_.size() + 1);
  out.push_back(t);
  out.insert(out.end(), steps_.begin(), steps_.end());
  return History(std::move(out));
}

History History::prepended(const History& prefix) const { return concat(prefix, *this); }

History History::appended(const Transition& t) const {
  auto out = steps_;
  out.push_back(t);
  return History(std::move(out));
}

bool History::has_prefix(const History& prefix) const {
  if (prefix.length() > length()) return false;
  return std::equal(prefix.steps_.begin(), prefix.steps_.end(), steps_.begin());
}

History History::suffix_after(std::size_t n) const {
  if (n >= steps_.size()) return {};
  return History(std::vector<Transition>(steps_.begin() + static_cast<std::ptrdiff_t>(n), steps_.end()));
}

History concat(const History& a, const History& b) {
  std::vector<Transition> out = a.steps();
  out.insert(out.end(), b.steps().begin(), b.steps().end());
  return History(std::move(out));
}

std::vector<History> histories_up_to(const Alphabet& alphabet, std::size_t max_length) {
  std::vector<History> out{History{}};
  std::vector<History> layer{History{}};
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<History> next;
    for (const auto& h : layer)
      for (const auto& t : alphabet.transitions()) next.push_back(h.appended(t));
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::string to_string(const History& h, const Alphabet& alphabet) {
  if (h.is_empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < h.length(); ++i) {
    if (i) out += " · ";
    out += alphabet.name(h[i]);
  }
  return out;
}

}  // namespace rewardkit
