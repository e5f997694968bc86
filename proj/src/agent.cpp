#include "socsim/agent.hpp"

#include <algorithm>
#include <stdexcept>

#include "socsim/environments.hpp"

namespace socsim {

int MBState::row_index(StateId s, ActionId a) const {
    int idx = 0;
    for (int i = 0; i < s; ++i) idx += actions_per_state[i];
    return idx + a;
}

DualAgent make_agent(const EnvironmentSpec& spec, const DualConfig& cfg, double alpha,
                     double gamma, int mbus, ModelMode mode,
                     std::optional<StateId> hidden_state) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("make_agent: alpha must be in (0,1]");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("make_agent: gamma must be in [0,1)");
    if (mbus < 0) throw std::invalid_argument("make_agent: mbus must be >= 0");

    DualAgent agent;
    agent.cfg = cfg;
    agent.mf.q = QTable(spec.actions_per_state);
    agent.mf.alpha = alpha;
    agent.mf.gamma = gamma;

    MBState& mb = agent.mb;
    mb.mode = mode;
    mb.actions_per_state = spec.actions_per_state;
    mb.q = QTable(spec.actions_per_state);
    mb.scratch = mb.q;
    mb.mbus = mbus;
    mb.gamma = gamma;
    mb.hidden_state = hidden_state;

    if (mode == ModelMode::KnownModel) {
        mb.model = spec.rows;
        if (hidden_state)
            drop_state_from_rows(mb.model, spec.actions_per_state, *hidden_state);
    } else {
        mb.model.resize(spec.rows.size());
        mb.tallies.resize(spec.rows.size());
        int idx = 0;
        for (int s = 0; s < spec.n_states; ++s)
            for (int a = 0; a < spec.actions_per_state[s]; ++a, ++idx)
                mb.model[idx] = {{s, 1.0, 0.0}};
    }
    return agent;
}

QTable blend_q(double beta, const QTable& q_mb, const QTable& q_mf) {
    if (!q_mb.same_shape(q_mf))
        throw std::invalid_argument("blend_q: mismatched (state, action) spaces");
    QTable out = q_mf;
    auto mb = q_mb.flat();
    auto flat = out.flat();
    for (std::size_t i = 0; i < flat.size(); ++i)
        flat[i] = beta * mb[i] + (1.0 - beta) * flat[i];
    return out;
}

ActionId select_action(const DualAgent& agent, StateId s, RandomStream& rng) {
    const int n = agent.mf.q.n_actions(s);
    if (rng.next_double() < agent.cfg.epsilon)
        return static_cast<ActionId>(rng.next_below(static_cast<std::uint64_t>(n)));
    ActionId best = 0;
    double best_v = blended_value(agent, s, 0);
    for (int a = 1; a < n; ++a) {
        const double v = blended_value(agent, s, a);
        if (v > best_v) {
            best_v = v;
            best = a;
        }
    }
    return best;
}

void mf_update(MFState& mf, StateId s, ActionId a, double r, StateId s2) {
    const double target = r + mf.gamma * mf.q.row_max(s2);
    double& q = mf.q.at(s, a);
    q += mf.alpha * (target - q);
}

void mb_observe(MBState& mb, StateId s, ActionId a, double r, StateId s2) {
    if (mb.mode == ModelMode::KnownModel) return;
    const int idx = mb.row_index(s, a);
    auto& tally = mb.tallies[idx];
    auto it = std::find_if(tally.begin(), tally.end(),
                           [&](const MBState::Tally& t) { return t.next == s2; });
    if (it == tally.end()) {
        tally.push_back({s2, 1, r});
    } else {
        it->count += 1;
        it->reward_sum += r;
    }
    // Re-derive just this row: P = count/total, R = sum/count.
    long long total = 0;
    for (const auto& t : tally)
        if (!mb.hidden_state || t.next != *mb.hidden_state) total += t.count;
    auto& row = mb.model[idx];
    row.clear();
    if (total == 0) {
        row.push_back({s, 1.0, 0.0});
        return;
    }
    for (const auto& t : tally) {
        if (mb.hidden_state && t.next == *mb.hidden_state) continue;
        row.push_back({t.next, static_cast<double>(t.count) / static_cast<double>(total),
                       t.reward_sum / static_cast<double>(t.count)});
    }
}

void mb_plan(MBState& mb) {
    for (int i = 0; i < mb.mbus; ++i) {
        bellman_sweep(mb.model, mb.actions_per_state, mb.gamma, mb.q, mb.scratch);
        std::swap(mb.q, mb.scratch);
    }
}

ReferencePolicy make_reference(const QTable& reference_q, double tie_tol) {
    return {greedy_policy(reference_q, tie_tol), tie_tol};
}

bool is_addicted(const DualAgent& agent, const ReferencePolicy& ref) {
    const QTable& mbq = agent.mb.q;
    const QTable& mfq = agent.mf.q;
    const double beta = agent.cfg.beta;
    const double tol = agent.cfg.tie_tol;
    for (int s = 0; s < mfq.n_states(); ++s) {
        const int n = mfq.n_actions(s);
        double best = beta * mbq.at(s, 0) + (1.0 - beta) * mfq.at(s, 0);
        for (int a = 1; a < n; ++a)
            best = std::max(best, beta * mbq.at(s, a) + (1.0 - beta) * mfq.at(s, a));
        const auto& allowed = ref.greedy[s];
        if (allowed.size() == 1) {
            // Unique optimum: the agent's whole greedy set must equal it.
            for (int a = 0; a < n; ++a) {
                const double v = beta * mbq.at(s, a) + (1.0 - beta) * mfq.at(s, a);
                const bool in_set = best - v <= tol;
                if (in_set != (a == allowed[0])) return true;
            }
        } else {
            // Tied reference: the deterministic choice must be acceptable.
            ActionId pick = 0;
            double pick_v = beta * mbq.at(s, 0) + (1.0 - beta) * mfq.at(s, 0);
            for (int a = 1; a < n; ++a) {
                const double v = beta * mbq.at(s, a) + (1.0 - beta) * mfq.at(s, a);
                if (v > pick_v) {
                    pick_v = v;
                    pick = a;
                }
            }
            if (!std::binary_search(allowed.begin(), allowed.end(), pick)) return true;
        }
    }
    return false;
}

bool is_addicted(const DualAgent& agent, const QTable& reference_q, double tie_tol) {
    return is_addicted(agent, make_reference(reference_q, tie_tol));
}

} // namespace socsim
