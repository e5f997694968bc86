#include "socsim/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <stdexcept>

namespace socsim {

namespace {

constexpr double kRowSumTol = 1e-9;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

void EnvironmentSpec::finalize() {
    row_offsets.assign(static_cast<std::size_t>(n_states), 0);
    int acc = 0;
    for (int s = 0; s < n_states; ++s) {
        row_offsets[s] = acc;
        acc += actions_per_state[s];
    }
}

bool EnvironmentSpec::is_interaction(StateId s) const {
    return std::binary_search(interaction_states.begin(), interaction_states.end(), s);
}

StateId EnvironmentSpec::find_label(const std::string& label) const {
    for (int s = 0; s < static_cast<int>(state_labels.size()); ++s)
        if (state_labels[s] == label) return s;
    return -1;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::string out;
    for (const auto& v : violations) {
        out += v.location + ": " + v.rule;
        if (!v.measured.empty()) out += " (" + v.measured + ")";
        out += '\n';
    }
    return out;
}

namespace {

// Modulated rows must stay stochastic for every arm; mirrors the transform
// applied by the harness (clamp the Aftereffects mass, rescale the rest).
void check_arm_table(const EnvironmentSpec& spec, ValidationReport& rep) {
    const ArmTable& arms = *spec.arm_modulation;
    auto add = [&](std::string loc, std::string rule, std::string meas) {
        rep.violations.push_back({std::move(loc), std::move(rule), std::move(meas)});
    };
    if (arms.n_arms < 1) {
        add("arm_modulation.n_arms", "must be >= 1", fmt(arms.n_arms));
        return;
    }
    auto check_len = [&](const std::vector<double>& v, const char* name) {
        if (static_cast<int>(v.size()) != arms.n_arms)
            add(std::string("arm_modulation.") + name, "length must equal n_arms",
                fmt(static_cast<double>(v.size())));
    };
    check_len(arms.user_reward_mean, "user_reward_mean");
    check_len(arms.accept_probability, "accept_probability");
    check_len(arms.aftereffect_shift, "aftereffect_shift");
    for (int k = 0; k < static_cast<int>(arms.accept_probability.size()); ++k)
        if (arms.accept_probability[k] < 0.0 || arms.accept_probability[k] > 1.0)
            add("arm_modulation.accept_probability[" + std::to_string(k) + "]",
                "out of range [0,1]", fmt(arms.accept_probability[k]));
    for (StateId s : arms.modulated_states) {
        if (!spec.is_interaction(s)) {
            add("arm_modulation.modulated_states", "not an interaction state", fmt(s));
            continue;
        }
    }
    const StateId after = spec.find_label("Aftereffects");
    bool any_shift = std::any_of(arms.aftereffect_shift.begin(), arms.aftereffect_shift.end(),
                                 [](double x) { return x != 0.0; });
    if (any_shift && !arms.modulated_states.empty() && after < 0)
        add("arm_modulation.aftereffect_shift", "requires a state labeled Aftereffects", "");
    if (rep.ok() && after >= 0) {
        for (StateId s : arms.modulated_states) {
            if (!spec.valid_state(s) || spec.actions_per_state[s] < 1) continue;
            const auto base = spec.row(s, 0);
            for (int k = 0; k < arms.n_arms; ++k) {
                double pa = 0.0, rest = 0.0;
                for (const auto& o : base) (o.next == after ? pa : rest) += o.prob;
                double shifted = std::clamp(pa + arms.aftereffect_shift[k], 0.0, 1.0);
                double total = shifted + (pa < 1.0 ? rest * (1.0 - shifted) / (1.0 - pa) : 0.0);
                if (std::fabs(total - 1.0) > kRowSumTol)
                    add("arm_modulation[arm=" + std::to_string(k) + ",s=" + std::to_string(s) + "]",
                        "modulated row does not renormalize to 1", fmt(total));
            }
        }
    }
}

} // namespace

ValidationReport validate_spec(const EnvironmentSpec& spec) {
    ValidationReport rep;
    auto add = [&](std::string loc, std::string rule, std::string meas = "") {
        rep.violations.push_back({std::move(loc), std::move(rule), std::move(meas)});
    };

    if (spec.n_states < 1) {
        add("n_states", "must be >= 1", fmt(spec.n_states));
        return rep;
    }
    if (static_cast<int>(spec.actions_per_state.size()) != spec.n_states) {
        add("actions_per_state", "length must equal n_states",
            fmt(static_cast<double>(spec.actions_per_state.size())));
        return rep;
    }
    if (!spec.state_labels.empty() &&
        static_cast<int>(spec.state_labels.size()) != spec.n_states)
        add("state_labels", "length must equal n_states",
            fmt(static_cast<double>(spec.state_labels.size())));

    int total_rows = 0;
    for (int s = 0; s < spec.n_states; ++s) {
        if (spec.actions_per_state[s] < 1)
            add("actions_per_state[" + std::to_string(s) + "]", "every state needs >= 1 action",
                fmt(spec.actions_per_state[s]));
        total_rows += spec.actions_per_state[s];
    }
    if (static_cast<int>(spec.rows.size()) != total_rows) {
        add("transitions", "row count must cover every (state, action) pair",
            fmt(static_cast<double>(spec.rows.size())));
        return rep;
    }

    for (int s = 0; s < spec.n_states; ++s) {
        for (int a = 0; a < spec.actions_per_state[s]; ++a) {
            const auto& row = spec.rows[spec.row_index(s, a)];
            const std::string loc = "transitions[s=" + std::to_string(s) + ",a=" + std::to_string(a) + "]";
            if (row.empty()) {
                add(loc, "empty transition row");
                continue;
            }
            double sum = 0.0;
            for (const auto& o : row) {
                if (o.prob < 0.0 || o.prob > 1.0)
                    add(loc, "probability out of range [0,1]", fmt(o.prob));
                if (o.next < 0 || o.next >= spec.n_states)
                    add(loc, "next state out of range", fmt(o.next));
                sum += o.prob;
            }
            if (std::fabs(sum - 1.0) > kRowSumTol)
                add(loc, "row probabilities must sum to 1", fmt(sum));
        }
    }

    if (!spec.valid_state(spec.start_state))
        add("start_state", "out of range", fmt(spec.start_state));
    for (StateId s : spec.interaction_states)
        if (!spec.valid_state(s)) add("interaction_states", "out of range", fmt(s));
    if (!(spec.gamma_reference >= 0.0 && spec.gamma_reference < 1.0))
        add("gamma_reference", "out of range [0,1)", fmt(spec.gamma_reference));

    if (spec.arm_modulation) check_arm_table(spec, rep);

    // Reachability closure over nonzero-probability edges. A misrepresented
    // spec is allowed an unreachable Healthy state, nothing else.
    if (rep.ok()) {
        std::vector<char> seen(static_cast<std::size_t>(spec.n_states), 0);
        std::deque<StateId> queue{spec.start_state};
        seen[spec.start_state] = 1;
        while (!queue.empty()) {
            StateId s = queue.front();
            queue.pop_front();
            for (int a = 0; a < spec.actions_per_state[s]; ++a)
                for (const auto& o : spec.row(s, a))
                    if (o.prob > 0.0 && !seen[o.next]) {
                        seen[o.next] = 1;
                        queue.push_back(o.next);
                    }
        }
        const StateId healthy = spec.find_label("Healthy");
        for (int s = 0; s < spec.n_states; ++s) {
            if (seen[s]) continue;
            if (spec.misrepresented && s == healthy) continue;
            add("states[" + std::to_string(s) + "]", "unreachable from start_state");
        }
    }
    return rep;
}

StepOutcome sample_outcome(std::span<const Outcome> row, RandomStream& rng) {
    const double u = rng.next_double();
    double cum = 0.0;
    for (const auto& o : row) {
        cum += o.prob;
        if (u < cum) return {o.next, o.reward, false};
    }
    // Rounding can leave u marginally above the accumulated mass; the tail
    // entry with nonzero probability absorbs it.
    for (auto it = row.rbegin(); it != row.rend(); ++it)
        if (it->prob > 0.0) return {it->next, it->reward, false};
    return {row.back().next, row.back().reward, false};
}

StepOutcome step(const EnvironmentSpec& spec, StateId s, ActionId a, RandomStream& rng) {
    if (!spec.valid_action(s, a))
        throw std::invalid_argument("step: invalid (state, action) pair (" +
                                    std::to_string(s) + ", " + std::to_string(a) + ")");
    return sample_outcome(spec.row(s, a), rng);
}

double bellman_sweep(const std::vector<std::vector<Outcome>>& model,
                     std::span<const int> actions_per_state,
                     double gamma, const QTable& in, QTable& out) {
    double delta = 0.0;
    int idx = 0;
    for (int s = 0; s < static_cast<int>(actions_per_state.size()); ++s) {
        for (int a = 0; a < actions_per_state[s]; ++a, ++idx) {
            double q = 0.0;
            for (const auto& o : model[idx])
                q += o.prob * (o.reward + gamma * in.row_max(o.next));
            delta = std::max(delta, std::fabs(q - in.at(s, a)));
            out.at(s, a) = q;
        }
    }
    return delta;
}

QTable optimal_q(const EnvironmentSpec& spec, double gamma, double tol) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("optimal_q: gamma must be in [0,1)");
    if (!(tol > 0.0)) throw std::invalid_argument("optimal_q: tol must be positive");
    QTable q(spec.actions_per_state);
    QTable next = q;
    // Contraction guarantees termination for gamma < 1.
    while (true) {
        const double delta = bellman_sweep(spec.rows, spec.actions_per_state, gamma, q, next);
        std::swap(q, next);
        if (delta < tol) break;
    }
    return q;
}

std::vector<std::vector<ActionId>> greedy_policy(const QTable& q, double tie_tol) {
    std::vector<std::vector<ActionId>> policy(static_cast<std::size_t>(q.n_states()));
    for (int s = 0; s < q.n_states(); ++s) policy[s] = q.greedy_set(s, tie_tol);
    return policy;
}

} // namespace socsim
