#pragma once

#include <optional>

#include "socsim/mdp.hpp"

namespace socsim {

enum class ModelMode { KnownModel, LearnedModel };

// Habitual learner: plain tabular Q-learning.
struct MFState {
    QTable q;
    double alpha = 0.1;
    double gamma = 0.9;
};

// Goal-directed learner: maintains transition/reward estimates and plans by
// synchronous Q-value iteration, `mbus` full sweeps per environment step.
struct MBState {
    ModelMode mode = ModelMode::LearnedModel;
    std::vector<std::vector<Outcome>> model; // derived (or given) rows
    std::vector<int> actions_per_state;
    QTable q;
    QTable scratch; // sweep double-buffer
    int mbus = 1;
    double gamma = 0.9;
    // Learned-model sufficient statistics, parallel to `model` rows.
    struct Tally {
        StateId next;
        long long count = 0;
        double reward_sum = 0.0;
    };
    std::vector<std::vector<Tally>> tallies;
    // When set, derived rows never target this state (corrupted-model
    // misrepresentation); the world itself is untouched.
    std::optional<StateId> hidden_state;

    int row_index(StateId s, ActionId a) const;
};

struct DualConfig {
    double beta = 0.75;         // Q_M = beta*Q_MB + (1-beta)*Q_MF
    double epsilon = 0.3;
    double epsilon_decay = 0.999;
    double epsilon_min = 0.01;
    double tie_tol = 1e-9;
};

struct DualAgent {
    MFState mf;
    MBState mb;
    DualConfig cfg;
};

// Fresh agent over `spec`'s index space. KnownModel copies the spec's base
// rows (what the world does when no arm interferes); LearnedModel starts each
// unvisited (s, a) as a zero-reward self-loop so unexplored actions cannot
// leak fictitious value.
DualAgent make_agent(const EnvironmentSpec& spec, const DualConfig& cfg, double alpha,
                     double gamma, int mbus, ModelMode mode,
                     std::optional<StateId> hidden_state = std::nullopt);

// Elementwise blend beta*q_mb + (1-beta)*q_mf. Throws on shape mismatch.
QTable blend_q(double beta, const QTable& q_mb, const QTable& q_mf);

// Blended value of one (s, a) without materializing the full table.
inline double blended_value(const DualAgent& agent, StateId s, ActionId a) {
    return agent.cfg.beta * agent.mb.q.at(s, a) + (1.0 - agent.cfg.beta) * agent.mf.q.at(s, a);
}

// Epsilon-greedy over the blended values; exploitation takes the lowest-index
// greedy action.
ActionId select_action(const DualAgent& agent, StateId s, RandomStream& rng);

// Q(s,a) += alpha * (r + gamma max_a' Q(s2,a') - Q(s,a)); touches one entry.
void mf_update(MFState& mf, StateId s, ActionId a, double r, StateId s2);

// Count-based model re-estimation of row (s, a). No-op in KnownModel mode.
void mb_observe(MBState& mb, StateId s, ActionId a, double r, StateId s2);

// Exactly mbus synchronous Bellman-optimality sweeps against mb.model,
// starting from the current q.
void mb_plan(MBState& mb);

// Precomputed reference optimal policy for the addiction test.
struct ReferencePolicy {
    std::vector<std::vector<ActionId>> greedy; // per state, ascending
    double tie_tol = 1e-9;
};

ReferencePolicy make_reference(const QTable& reference_q, double tie_tol);

// An agent is addicted when its blended greedy behavior deviates from the
// reference optimal policy: at every state where the reference optimum is
// unique, the agent's greedy set must be exactly that singleton; where the
// reference ties, the agent's deterministic choice must fall inside the set.
bool is_addicted(const DualAgent& agent, const ReferencePolicy& ref);
bool is_addicted(const DualAgent& agent, const QTable& reference_q, double tie_tol);

} // namespace socsim
