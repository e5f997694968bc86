#pragma once

#include <vector>

#include "socsim/rng.hpp"

namespace socsim {

enum class RejectionScheme { Neutral, Punitive };

// Non-stationary multi-armed bandit: constant-step-size exponential
// recency-weighted value estimates, epsilon-greedy arm choice.
struct BanditState {
    int n_arms = 0;
    std::vector<double> q_arms;
    std::vector<long long> pull_counts;
    double eta = 0.05;      // recency weight, (0,1]
    double epsilon_r = 0.1; // exploration rate
};

BanditState make_bandit(int n_arms, double eta, double epsilon_r, double q_init);

// With probability epsilon_r a uniform arm, otherwise the lowest-index argmax.
int select_arm(const BanditState& b, RandomStream& rng);

// q[arm] += eta * (reward - q[arm]); exactly one arm changes.
void bandit_update(BanditState& b, int arm, double reward);

// Acceptance pays +1; rejection pays 0 (Neutral) or -1 (Punitive).
double reward_from_interaction(bool accepted, RejectionScheme scheme);

} // namespace socsim
