#pragma once

// Oracle configuration files and RewardSpec serialization.
//
//   RewardSpec  {"alphabet": Alphabet, "relaxed": bool, "scale": number|null,
//                "transitions": [{"transition": T, "name": str, "r": x, "gamma": x, "identifiable": bool}]}
//
//   Oracle configs carry a "kind" tag:
//     markov            {"spec": RewardSpec, "epsilon_u": x}
//     history-utility   {"alphabet", "utilities": [{"history": H, "u": x}], "epsilon_u"}
//     cmdp              {"alphabet", "outcomes": [{"history": H, "r1": x, "r2": x}], "threshold", "epsilon_u"}
//     risk              {"alphabet", "rewards": [{"transition": T, "r": x}], "lambda", "epsilon_u"}
//     preference-table  {"alphabet", "entries": [{"lhs": Lottery, "rhs": Lottery, "verdict": str}]}

#include <memory>

#include "rewardkit/lottery/json.hpp"
#include "rewardkit/oracle/reward_spec.hpp"
#include "rewardkit/oracle/table_oracle.hpp"
#include "rewardkit/oracle/utility_oracle.hpp"

namespace rewardkit {

Json to_json(const RewardSpec& spec);
RewardSpec reward_spec_from_json(const Json& j);

Json to_json(const UtilityOracleConfig& config, const Alphabet& alphabet);
Json table_oracle_json(const Alphabet& alphabet, const std::vector<PreferenceEntry>& entries);

std::unique_ptr<PreferenceOracle> oracle_from_json(const Json& j);

}  // namespace rewardkit
