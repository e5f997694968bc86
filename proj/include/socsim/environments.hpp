#pragma once

#include "socsim/mdp.hpp"

namespace socsim {

enum class EnvironmentLevel { Simplified, Advanced, RefinedRecommender };

const char* to_string(EnvironmentLevel level);

// Action convention in interaction states: action 0 engages with the content
// (keep-scrolling), the last action quits. Single-action states conflate the
// two, which disables the acceptance filter there.
inline constexpr ActionId kEngageAction = 0;

inline ActionId quit_action(const EnvironmentSpec& spec, StateId s) {
    return spec.actions_per_state[s] - 1;
}

// Default content table: monotone arms so the bandit has a well-ordered
// learning target (arm 3 is the most enticing and the most harmful).
ArmTable default_arm_table();

// 4 states {Neutral, Healthy, Interaction, Aftereffects}; deterministic core
// loop for debugging and the theoretical checks.
EnvironmentSpec build_simplified();

// 6 states; adds EngagedBrowsing past Interaction and a Recovery state after
// Aftereffects, with stochastic healthy/engagement transitions.
EnvironmentSpec build_advanced();

// 7 states; Interaction split into LightUse and HeavyUse, both interaction
// states. HeavyUse's engage payoff and its Aftereffects risk are modulated by
// the presented arm.
EnvironmentSpec build_refined(const ArmTable& arms);

EnvironmentSpec build_level(EnvironmentLevel level);

// Zeroes every transition probability into the Healthy state and renormalizes
// the affected rows (an all-zero row collapses to a self-loop). Idempotent;
// the result carries misrepresented = true.
EnvironmentSpec apply_misrepresentation(const EnvironmentSpec& spec);

// Same edge-dropping transform on bare model rows; used for the corrupted
// internal-model variant where the environment itself stays intact.
void drop_state_from_rows(std::vector<std::vector<Outcome>>& rows,
                          std::span<const int> actions_per_state, StateId hidden);

// Row of (s, a) as experienced while `arm` is presented: engage payoff
// replaced by the arm's user_reward_mean (crash entries keep their penalty)
// and the Aftereffects mass shifted by the arm's aftereffect_shift.
// Returns the base row untouched when (s, a) is not modulated.
std::vector<Outcome> arm_modulated_row(const EnvironmentSpec& spec, StateId s, ActionId a, int arm);

// Allocation-free variant for the hot loop; `out` is reused scratch.
void arm_modulated_row_into(const EnvironmentSpec& spec, StateId s, ActionId a, int arm,
                            std::vector<Outcome>& out);

} // namespace socsim
