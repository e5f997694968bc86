#pragma once

// Test-only oracles, independent of the value-iteration path they check.

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "socsim/mdp.hpp"
#include "socsim/rng.hpp"

namespace socsim::test {

// Dense Gaussian elimination with partial pivoting; plenty for the <=5-state
// policy-evaluation systems used by the oracle.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                        std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (std::fabs(a[col][col]) < 1e-14) throw std::runtime_error("singular system");
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

// Exact policy evaluation: V = (I - gamma P_pi)^-1 R_pi.
inline std::vector<double> evaluate_policy(const EnvironmentSpec& spec,
                                           const std::vector<ActionId>& policy, double gamma) {
    const int n = spec.n_states;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) {
        a[s][s] += 1.0;
        for (const auto& o : spec.row(s, policy[s])) {
            a[s][o.next] -= gamma * o.prob;
            b[s] += o.prob * o.reward;
        }
    }
    return solve_linear(std::move(a), std::move(b));
}

// Brute force: enumerate every deterministic policy, evaluate each exactly,
// take the pointwise max as V*, then Q*(s,a) by one-step lookahead.
inline QTable enumerate_optimal_q(const EnvironmentSpec& spec, double gamma) {
    const int n = spec.n_states;
    std::vector<ActionId> policy(static_cast<std::size_t>(n), 0);
    std::vector<double> v_star(static_cast<std::size_t>(n),
                               -std::numeric_limits<double>::infinity());
    while (true) {
        const auto v = evaluate_policy(spec, policy, gamma);
        for (int s = 0; s < n; ++s) v_star[s] = std::max(v_star[s], v[s]);
        int s = 0;
        while (s < n) {
            if (++policy[s] < spec.actions_per_state[s]) break;
            policy[s] = 0;
            ++s;
        }
        if (s == n) break;
    }
    QTable q(spec.actions_per_state);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < spec.actions_per_state[s]; ++a) {
            double acc = 0.0;
            for (const auto& o : spec.row(s, a))
                acc += o.prob * (o.reward + gamma * v_star[o.next]);
            q.at(s, a) = acc;
        }
    return q;
}

// Random dense MDP with every state reachable (each row covers all states).
inline EnvironmentSpec random_mdp(RandomStream& rng, int max_states = 5, int max_actions = 3) {
    EnvironmentSpec spec;
    spec.n_states = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_states - 1)));
    for (int s = 0; s < spec.n_states; ++s) {
        spec.state_labels.push_back("s" + std::to_string(s));
        spec.actions_per_state.push_back(
            1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_actions))));
    }
    for (int s = 0; s < spec.n_states; ++s) {
        for (int a = 0; a < spec.actions_per_state[s]; ++a) {
            std::vector<Outcome> row;
            double total = 0.0;
            for (int s2 = 0; s2 < spec.n_states; ++s2) {
                const double w = 0.05 + rng.next_double();
                row.push_back({s2, w, rng.next_double() * 4.0 - 2.0});
                total += w;
            }
            for (auto& o : row) o.prob /= total;
            // nudge the row so the probabilities sum to exactly 1
            double sum = 0.0;
            for (const auto& o : row) sum += o.prob;
            row.back().prob += 1.0 - sum;
            spec.rows.push_back(std::move(row));
        }
    }
    spec.start_state = 0;
    spec.gamma_reference = 0.9;
    spec.finalize();
    return spec;
}

inline double max_abs_diff(const QTable& a, const QTable& b) {
    double m = 0.0;
    auto fa = a.flat(), fb = b.flat();
    for (std::size_t i = 0; i < fa.size(); ++i) m = std::max(m, std::fabs(fa[i] - fb[i]));
    return m;
}

} // namespace socsim::test
