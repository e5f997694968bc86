#pragma once

#include <json.hpp>

#include "socsim/mdp.hpp"

namespace socsim {

// JSON document form of an EnvironmentSpec:
//   n_states, state_labels, actions_per_state,
//   transitions: [{s, a, next: [[s2, p], ...]}, ...],
//   rewards:     [{s, a, s2, r}, ...],
//   start_state, interaction_states, gamma_reference,
//   optional arm_modulation {n_arms, user_reward_mean, accept_probability,
//                            aftereffect_shift, modulated_states},
//   optional misrepresented.
// Rewards absent from the document default to 0 on load; the in-memory table
// is explicit and total after validation.
nlohmann::json env_to_json(const EnvironmentSpec& spec);

// Parses and validates; throws std::invalid_argument carrying the JSON path
// and rule for malformed documents or invariant violations.
EnvironmentSpec env_from_json(const nlohmann::json& j);

} // namespace socsim
