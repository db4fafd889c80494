#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rewardkit {

using SymbolId = std::uint32_t;

/// Action slot value for designer-only transitions that carry no action.
inline constexpr SymbolId kNoAction = 0xFFFFFFFFu;

/// One observation/action pair. Designer histories use kNoAction.
struct Transition {
  SymbolId observation = 0;
  SymbolId action = kNoAction;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

class AlphabetMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite transition alphabet: named observation and action symbols plus the
/// declared transition set (defaults to the full product O x A).
class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::vector<std::string> observations, std::vector<std::string> actions);
  Alphabet(std::vector<std::string> observations, std::vector<std::string> actions,
           std::vector<Transition> transitions);

  /// Designer alphabet: one transition per observation, no actions.
  static Alphabet designer(std::vector<std::string> observations);

  const std::vector<std::string>& observations() const { return observations_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  std::size_t size() const { return transitions_.size(); }
  bool empty() const { return transitions_.empty(); }

  bool contains(const Transition& t) const;
  /// Position of t in transitions(), or nullopt.
  std::optional<std::size_t> index_of(const Transition& t) const;
  void require(const Transition& t) const;

  /// "obs/act" (or just "obs" for designer transitions).
  std::string name(const Transition& t) const;
  Transition parse_name(const std::string& name) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> observations_;
  std::vector<std::string> actions_;
  std::vector<Transition> transitions_;  // sorted, unique
};

/// Finite sequence of transitions; the empty history is epsilon.
class History {
 public:
  History() = default;
  History(std::initializer_list<Transition> ts) : steps_(ts) {}
  explicit History(std::vector<Transition> ts) : steps_(std::move(ts)) {}

  static History empty() { return {}; }

  std::size_t length() const { return steps_.size(); }
  bool is_empty() const { return steps_.empty(); }
  const std::vector<Transition>& steps() const { return steps_; }
  const Transition& operator[](std::size_t i) const { return steps_[i]; }

  /// t . h
  History prepended(const Transition& t) const;
  /// prefix . h
  History prepended(const History& prefix) const;
  History appended(const Transition& t) const;
  bool has_prefix(const History& prefix) const;
  /// Removes the first n transitions.
  History suffix_after(std::size_t n) const;

  friend auto operator<=>(const History& a, const History& b) {
    // Shorter histories first, then lexicographic: epsilon sorts first.
    if (a.steps_.size() != b.steps_.size()) return a.steps_.size() <=> b.steps_.size();
    return a.steps_ <=> b.steps_;
  }
  friend bool operator==(const History&, const History&) = default;

 private:
  std::vector<Transition> steps_;
};

History concat(const History& a, const History& b);

/// All histories of length <= max_length over the alphabet, ordered by length
/// then lexicographically (epsilon first).
std::vector<History> histories_up_to(const Alphabet& alphabet, std::size_t max_length);

std::string to_string(const History& h, const Alphabet& alphabet);

}  // namespace rewardkit
