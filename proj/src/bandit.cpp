#include "socsim/bandit.hpp"

#include <stdexcept>

namespace socsim {

BanditState make_bandit(int n_arms, double eta, double epsilon_r, double q_init) {
    if (n_arms < 1) throw std::invalid_argument("make_bandit: n_arms must be >= 1");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("make_bandit: eta must be in (0,1]");
    if (!(epsilon_r >= 0.0 && epsilon_r <= 1.0))
        throw std::invalid_argument("make_bandit: epsilon_r must be in [0,1]");
    BanditState b;
    b.n_arms = n_arms;
    b.q_arms.assign(static_cast<std::size_t>(n_arms), q_init);
    b.pull_counts.assign(static_cast<std::size_t>(n_arms), 0);
    b.eta = eta;
    b.epsilon_r = epsilon_r;
    return b;
}

int select_arm(const BanditState& b, RandomStream& rng) {
    if (rng.next_double() < b.epsilon_r)
        return static_cast<int>(rng.next_below(static_cast<std::uint64_t>(b.n_arms)));
    int best = 0;
    for (int k = 1; k < b.n_arms; ++k)
        if (b.q_arms[k] > b.q_arms[best]) best = k;
    return best;
}

void bandit_update(BanditState& b, int arm, double reward) {
    if (arm < 0 || arm >= b.n_arms) throw std::invalid_argument("bandit_update: bad arm index");
    b.q_arms[arm] += b.eta * (reward - b.q_arms[arm]);
    b.pull_counts[arm] += 1;
}

double reward_from_interaction(bool accepted, RejectionScheme scheme) {
    if (accepted) return 1.0;
    return scheme == RejectionScheme::Neutral ? 0.0 : -1.0;
}

} // namespace socsim
