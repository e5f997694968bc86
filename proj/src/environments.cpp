#include "socsim/environments.hpp"

#include <algorithm>
#include <stdexcept>

namespace socsim {

const char* to_string(EnvironmentLevel level) {
    switch (level) {
        case EnvironmentLevel::Simplified: return "simplified";
        case EnvironmentLevel::Advanced: return "advanced";
        case EnvironmentLevel::RefinedRecommender: return "refined";
    }
    return "?";
}

ArmTable default_arm_table() {
    ArmTable t;
    t.n_arms = 4;
    t.user_reward_mean = {0.2, 0.4, 0.6, 0.8};
    t.accept_probability = {0.4, 0.55, 0.7, 0.85};
    t.aftereffect_shift = {0.0, 0.05, 0.10, 0.15};
    return t;
}

namespace {

// Thin builder so the state tables below read like the diagrams they encode.
struct SpecBuilder {
    EnvironmentSpec spec;

    StateId state(const std::string& label) {
        spec.state_labels.push_back(label);
        spec.actions_per_state.push_back(0);
        return spec.n_states++;
    }

    void action(StateId s, std::vector<Outcome> outcomes) {
        // Actions must be declared in order, state by state.
        spec.actions_per_state[s] += 1;
        spec.rows.push_back(std::move(outcomes));
    }

    EnvironmentSpec done(StateId start, std::vector<StateId> interaction) {
        spec.start_state = start;
        std::sort(interaction.begin(), interaction.end());
        spec.interaction_states = std::move(interaction);
        spec.gamma_reference = 0.9;
        spec.finalize();
        return std::move(spec);
    }
};

} // namespace

EnvironmentSpec build_simplified() {
    SpecBuilder b;
    const StateId neutral = b.state("Neutral");
    const StateId healthy = b.state("Healthy");
    const StateId interaction = b.state("Interaction");
    const StateId after = b.state("Aftereffects");

    // The healthy payoff lands one step late (on returning to Neutral), the
    // social payoff immediately: the habitual learner has to bootstrap the
    // delayed credit while the planner reads it straight off the model.
    b.action(neutral, {{healthy, 1.0, 0.0}});        // do-healthy
    b.action(neutral, {{interaction, 1.0, 0.3}});    // open-social-media
    b.action(healthy, {{neutral, 1.0, 1.2}});
    b.action(interaction, {{interaction, 0.7, 0.4},  // keep-scrolling
                           {after, 0.3, -2.0}});
    b.action(interaction, {{neutral, 1.0, 0.0}});    // quit
    b.action(after, {{neutral, 1.0, -0.5}});

    return b.done(neutral, {interaction});
}

EnvironmentSpec build_advanced() {
    SpecBuilder b;
    const StateId neutral = b.state("Neutral");
    const StateId healthy = b.state("Healthy");
    const StateId interaction = b.state("Interaction");
    const StateId after = b.state("Aftereffects");
    const StateId engaged = b.state("EngagedBrowsing");
    const StateId recovery = b.state("Recovery");

    b.action(neutral, {{healthy, 0.9, 0.0},          // do-healthy, noisy
                       {neutral, 0.1, 0.0}});
    b.action(neutral, {{interaction, 1.0, 0.3}});    // open-social-media
    b.action(healthy, {{neutral, 1.0, 1.2}});        // delayed payoff
    b.action(interaction, {{engaged, 0.5, 0.5},      // keep-scrolling
                           {interaction, 0.5, 0.4}});
    b.action(interaction, {{neutral, 1.0, 0.0}});    // quit
    b.action(after, {{recovery, 1.0, -0.5}});
    b.action(engaged, {{after, 0.6, -2.5},           // no way out but through
                       {engaged, 0.4, 0.5}});
    b.action(recovery, {{neutral, 1.0, -0.2}});

    return b.done(neutral, {interaction});
}

EnvironmentSpec build_refined(const ArmTable& arms) {
    if (arms.n_arms < 1 ||
        static_cast<int>(arms.user_reward_mean.size()) != arms.n_arms ||
        static_cast<int>(arms.accept_probability.size()) != arms.n_arms ||
        static_cast<int>(arms.aftereffect_shift.size()) != arms.n_arms)
        throw std::invalid_argument("build_refined: malformed arm table");
    for (double p : arms.accept_probability)
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("build_refined: accept_probability out of [0,1]");

    SpecBuilder b;
    const StateId neutral = b.state("Neutral");
    const StateId healthy = b.state("Healthy");
    const StateId light = b.state("LightUse");
    const StateId heavy = b.state("HeavyUse");
    const StateId engaged = b.state("EngagedBrowsing");
    const StateId after = b.state("Aftereffects");
    const StateId recovery = b.state("Recovery");

    // Margins are deliberately tight and state values sit near zero. The
    // healthy payoff lands one step late and barely beats the social route;
    // opening the feed usually pays a little now but sometimes drags the user
    // straight into Aftereffects; light scrolling is genuinely worth it
    // (quitting at LightUse is the mistake) while prolonged use is not. A
    // constant-alpha Q-learner keeps a persistent noise band around these
    // gaps; a count-based model pins them down and never forgets.
    b.action(neutral, {{healthy, 0.9, 0.0},
                       {neutral, 0.1, 0.0}});
    b.action(neutral, {{light, 0.88, 0.3},           // open-social-media
                       {after, 0.12, -1.0}});
    b.action(healthy, {{neutral, 1.0, 0.3}});        // delayed payoff
    b.action(light, {{light, 0.86, 0.134},           // light use mostly stays light
                     {heavy, 0.11, 0.134},
                     {after, 0.03, -0.6}});
    b.action(light, {{neutral, 1.0, 0.0}});          // quit
    b.action(heavy, {{after, 0.18, -1.4},            // arm shifts this mass
                     {engaged, 0.10, 0.5},
                     {heavy, 0.72, 0.5}});
    b.action(heavy, {{neutral, 1.0, 0.0}});          // quit
    b.action(engaged, {{after, 0.6, -2.5},
                       {engaged, 0.4, 0.5}});
    b.action(after, {{recovery, 1.0, -0.5}});
    b.action(recovery, {{neutral, 1.0, -0.2}});

    EnvironmentSpec spec = b.done(neutral, {light, heavy});
    ArmTable table = arms;
    table.modulated_states = {heavy};
    spec.arm_modulation = std::move(table);
    return spec;
}

EnvironmentSpec build_level(EnvironmentLevel level) {
    switch (level) {
        case EnvironmentLevel::Simplified: return build_simplified();
        case EnvironmentLevel::Advanced: return build_advanced();
        case EnvironmentLevel::RefinedRecommender: return build_refined(default_arm_table());
    }
    throw std::invalid_argument("build_level: unknown level");
}

void drop_state_from_rows(std::vector<std::vector<Outcome>>& rows,
                          std::span<const int> actions_per_state, StateId hidden) {
    int idx = 0;
    for (int s = 0; s < static_cast<int>(actions_per_state.size()); ++s) {
        for (int a = 0; a < actions_per_state[s]; ++a, ++idx) {
            auto& row = rows[idx];
            double removed = 0.0;
            double kept = 0.0;
            double self_reward = 0.0;
            for (const auto& o : row) {
                if (o.next == hidden) removed += o.prob;
                else kept += o.prob;
                if (o.next == s) self_reward = o.reward;
            }
            if (removed == 0.0) continue;
            std::erase_if(row, [&](const Outcome& o) { return o.next == hidden; });
            if (kept <= 0.0 || row.empty()) {
                row = {{s, 1.0, self_reward}};
                continue;
            }
            // Dividing by the surviving mass keeps every entry in [0, 1].
            for (auto& o : row) o.prob /= kept;
        }
    }
}

EnvironmentSpec apply_misrepresentation(const EnvironmentSpec& spec) {
    const StateId healthy = spec.find_label("Healthy");
    if (healthy < 0)
        throw std::invalid_argument("apply_misrepresentation: no state labeled Healthy");
    EnvironmentSpec out = spec;
    drop_state_from_rows(out.rows, out.actions_per_state, healthy);
    out.misrepresented = true;
    return out;
}

void arm_modulated_row_into(const EnvironmentSpec& spec, StateId s, ActionId a, int arm,
                            std::vector<Outcome>& out) {
    const auto base = spec.row(s, a);
    out.assign(base.begin(), base.end());
    if (!spec.arm_modulation || a != kEngageAction) return;
    const ArmTable& arms = *spec.arm_modulation;
    if (!std::count(arms.modulated_states.begin(), arms.modulated_states.end(), s)) return;
    if (arm < 0 || arm >= arms.n_arms)
        throw std::invalid_argument("arm_modulated_row: arm index out of range");

    const StateId after = spec.find_label("Aftereffects");
    double pa = 0.0;
    for (const auto& o : out)
        if (o.next == after) pa += o.prob;
    const double shifted = std::clamp(pa + arms.aftereffect_shift[arm], 0.0, 1.0);
    const double after_scale = pa > 0.0 ? shifted / pa : 0.0;
    const double rest_scale = pa < 1.0 ? (1.0 - shifted) / (1.0 - pa) : 0.0;
    for (auto& o : out) {
        if (o.next == after) {
            o.prob *= after_scale;
        } else {
            o.prob *= rest_scale;
            o.reward = arms.user_reward_mean[arm];
        }
    }
    if (pa == 0.0 && shifted > 0.0 && after >= 0)
        out.push_back({after, shifted, 0.0});
}

std::vector<Outcome> arm_modulated_row(const EnvironmentSpec& spec, StateId s, ActionId a, int arm) {
    std::vector<Outcome> out;
    arm_modulated_row_into(spec, s, a, arm, out);
    return out;
}

} // namespace socsim
