#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socsim/qtable.hpp"
#include "socsim/rng.hpp"

namespace socsim {

class RandomStream;

// One branch of a transition distribution. Rewards attach to (s, a, s')
// triples, so entry rewards like "penalty on reaching Aftereffects" can
// differ by source state.
struct Outcome {
    StateId next = 0;
    double prob = 0.0;
    double reward = 0.0;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Per-arm content table of the recommender. user_reward_mean replaces the
// engage-action payoff and aftereffect_shift raises the Aftereffects entry
// probability in the modulated (heavy-use) states while the arm is presented.
struct ArmTable {
    int n_arms = 0;
    std::vector<double> user_reward_mean;
    std::vector<double> accept_probability;
    std::vector<double> aftereffect_shift;
    std::vector<StateId> modulated_states;

    friend bool operator==(const ArmTable&, const ArmTable&) = default;
};

// Full tabular MDP plus the simulation metadata. Row order is the
// inverse-CDF sampling order, which makes traces bit-reproducible.
struct EnvironmentSpec {
    int n_states = 0;
    std::vector<std::string> state_labels;
    std::vector<int> actions_per_state;
    std::vector<std::vector<Outcome>> rows; // indexed by row_index(s, a)
    StateId start_state = 0;
    std::vector<StateId> interaction_states; // ascending, no duplicates
    std::optional<ArmTable> arm_modulation;
    double gamma_reference = 0.9;
    bool misrepresented = false;

    int row_index(StateId s, ActionId a) const { return row_offsets[s] + a; }
    std::span<const Outcome> row(StateId s, ActionId a) const { return rows[row_index(s, a)]; }

    // Dense row offsets; callers must invoke finalize() after building.
    std::vector<int> row_offsets;
    void finalize();

    bool valid_state(StateId s) const { return s >= 0 && s < n_states; }
    bool valid_action(StateId s, ActionId a) const {
        return valid_state(s) && a >= 0 && a < actions_per_state[s];
    }
    bool is_interaction(StateId s) const;
    // Index of the state carrying `label`, or -1.
    StateId find_label(const std::string& label) const;

    friend bool operator==(const EnvironmentSpec&, const EnvironmentSpec&) = default;
};

struct StepOutcome {
    StateId next = 0;
    double reward = 0.0;
    bool terminal = false; // fixed-horizon process: never set
};

struct Violation {
    std::string location;
    std::string rule;
    std::string measured;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Checks every EnvironmentSpec invariant: row stochasticity, probability
// ranges, index validity, reachability from start_state (Healthy exempt when
// misrepresented), and ArmTable consistency including post-shift
// renormalization of every modulated row. Violations are data, not failures.
ValidationReport validate_spec(const EnvironmentSpec& spec);

// Samples the next state by inverse CDF over the stored entry order and looks
// up the triple reward. Throws std::invalid_argument on an invalid (s, a).
StepOutcome step(const EnvironmentSpec& spec, StateId s, ActionId a, RandomStream& rng);

// Inverse-CDF draw over an explicit row (used by the harness when a row is
// arm-modulated for the current step).
StepOutcome sample_outcome(std::span<const Outcome> row, RandomStream& rng);

// One synchronous Bellman-optimality backup of every (s, a) against `model`:
// out(s,a) = sum_s' p (r + gamma max_a' in(s',a')). in/out must not alias.
// Returns the max-norm change.
double bellman_sweep(const std::vector<std::vector<Outcome>>& model,
                     std::span<const int> actions_per_state,
                     double gamma, const QTable& in, QTable& out);

// Synchronous Q-value iteration from zeros until the max-norm sweep change
// drops below tol. The result is within tol*(1+gamma)/(1-gamma) of Q*.
QTable optimal_q(const EnvironmentSpec& spec, double gamma, double tol);

// Per-state set of actions within tie_tol of the row maximum.
std::vector<std::vector<ActionId>> greedy_policy(const QTable& q, double tie_tol);

} // namespace socsim
