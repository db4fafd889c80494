#include "rewardkit/oracle/reward_spec.hpp"

#include <stdexcept>

namespace rewardkit {

RewardSpec::RewardSpec(Alphabet alphabet, std::map<Transition, RewardEntry> entries, bool relaxed)
    : alphabet_(std::move(alphabet)), entries_(std::move(entries)), relaxed_(relaxed) {
  validate();
}

RewardSpec RewardSpec::uniform(const Alphabet& alphabet, double reward, double discount, bool relaxed) {
  std::map<Transition, RewardEntry> entries;
  for (const auto& t : alphabet.transitions()) entries[t] = {reward, discount, true};
  return RewardSpec(alphabet, std::move(entries), relaxed);
}

const RewardEntry& RewardSpec::at(const Transition& t) const {
  auto it = entries_.find(t);
  if (it == entries_.end())
    throw AlphabetMismatch("reward spec has no entry for transition " + alphabet_.name(t));
  return it->second;
}

void RewardSpec::validate() const {
  for (const auto& t : alphabet_.transitions())
    if (!entries_.contains(t)) throw std::invalid_argument("reward spec missing transition " + alphabet_.name(t));
  for (const auto& [t, e] : entries_) {
    alphabet_.require(t);
    if (e.discount < 0.0) throw std::invalid_argument("negative discount for " + alphabet_.name(t));
    if (!relaxed_ && e.discount > 1.0)
      throw std::invalid_argument("discount > 1 for " + alphabet_.name(t) + " requires relaxed mode");
    if (!e.identifiable && e.discount != 1.0)
      throw std::invalid_argument("unidentifiable transition " + alphabet_.name(t) + " must carry discount 1");
  }
}

double markov_utility(const History& h, const RewardSpec& spec) {
  double u = 0.0;
  for (std::size_t i = h.length(); i-- > 0;) {
    const auto& e = spec.at(h[i]);
    u = e.reward + e.discount * u;
  }
  return u;
}

}  // namespace rewardkit
