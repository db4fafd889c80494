#pragma once

// JSON schema for lottery-core values.
//
//   Transition  [observation, action]        action is null for designer transitions
//   History     [[o, a], [o, a], ...]        [] is epsilon
//   Lottery     {"support": [{"history": History, "weight": "num/den"}, ...]}
//               entries ordered by history (length, then lexicographic)
//   Alphabet    {"observations": [names], "actions": [names], "transitions": [Transition, ...]}
//
// Serialization is canonical, so parse(dump(x)) re-dumps byte-identically.

#include <json.hpp>

#include "rewardkit/lottery/lottery.hpp"

namespace rewardkit {

using Json = nlohmann::json;

Json to_json(const Transition& t);
Transition transition_from_json(const Json& j);

Json to_json(const History& h);
History history_from_json(const Json& j);

Json to_json(const Lottery& l);
Lottery lottery_from_json(const Json& j);

Json to_json(const Alphabet& a);
Alphabet alphabet_from_json(const Json& j);

}  // namespace rewardkit
