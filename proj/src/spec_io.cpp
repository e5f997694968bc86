#include "socsim/spec_io.hpp"

#include <algorithm>
#include <stdexcept>

namespace socsim {

using nlohmann::json;

json env_to_json(const EnvironmentSpec& spec) {
    json j;
    j["n_states"] = spec.n_states;
    j["state_labels"] = spec.state_labels;
    j["actions_per_state"] = spec.actions_per_state;

    json transitions = json::array();
    json rewards = json::array();
    for (int s = 0; s < spec.n_states; ++s) {
        for (int a = 0; a < spec.actions_per_state[s]; ++a) {
            json next = json::array();
            for (const auto& o : spec.row(s, a)) {
                next.push_back({o.next, o.prob});
                rewards.push_back({{"s", s}, {"a", a}, {"s2", o.next}, {"r", o.reward}});
            }
            transitions.push_back({{"s", s}, {"a", a}, {"next", std::move(next)}});
        }
    }
    j["transitions"] = std::move(transitions);
    j["rewards"] = std::move(rewards);
    j["start_state"] = spec.start_state;
    j["interaction_states"] = spec.interaction_states;
    j["gamma_reference"] = spec.gamma_reference;
    if (spec.arm_modulation) {
        const ArmTable& t = *spec.arm_modulation;
        j["arm_modulation"] = {{"n_arms", t.n_arms},
                               {"user_reward_mean", t.user_reward_mean},
                               {"accept_probability", t.accept_probability},
                               {"aftereffect_shift", t.aftereffect_shift},
                               {"modulated_states", t.modulated_states}};
    }
    if (spec.misrepresented) j["misrepresented"] = true;
    return j;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& rule) {
    throw std::invalid_argument(path + ": " + rule);
}

template <typename T>
T get_field(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing required field");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(path + "." + key, "wrong type");
    }
}

} // namespace

EnvironmentSpec env_from_json(const json& j) {
    const std::string root = "environment";
    EnvironmentSpec spec;
    spec.n_states = get_field<int>(j, root, "n_states");
    if (j.contains("state_labels"))
        spec.state_labels = get_field<std::vector<std::string>>(j, root, "state_labels");
    spec.actions_per_state = get_field<std::vector<int>>(j, root, "actions_per_state");
    if (static_cast<int>(spec.actions_per_state.size()) != spec.n_states)
        fail(root + ".actions_per_state", "length must equal n_states");
    for (int n : spec.actions_per_state)
        if (n < 1) fail(root + ".actions_per_state", "every state needs >= 1 action");
    spec.finalize();

    int total_rows = 0;
    for (int n : spec.actions_per_state) total_rows += n;
    spec.rows.assign(static_cast<std::size_t>(total_rows), {});

    for (const auto& tr : get_field<json>(j, root, "transitions")) {
        const int s = get_field<int>(tr, root + ".transitions", "s");
        const int a = get_field<int>(tr, root + ".transitions", "a");
        if (s < 0 || s >= spec.n_states || a < 0 || a >= spec.actions_per_state[s])
            fail(root + ".transitions", "invalid (s, a) pair");
        auto& row = spec.rows[spec.row_index(s, a)];
        if (!row.empty()) fail(root + ".transitions", "duplicate (s, a) row");
        for (const auto& entry : get_field<json>(tr, root + ".transitions", "next")) {
            if (!entry.is_array() || entry.size() != 2)
                fail(root + ".transitions.next", "entries must be [next_state, probability]");
            row.push_back({entry[0].get<StateId>(), entry[1].get<double>(), 0.0});
        }
    }

    if (j.contains("rewards")) {
        for (const auto& rw : j.at("rewards")) {
            const int s = get_field<int>(rw, root + ".rewards", "s");
            const int a = get_field<int>(rw, root + ".rewards", "a");
            const int s2 = get_field<int>(rw, root + ".rewards", "s2");
            const double r = get_field<double>(rw, root + ".rewards", "r");
            if (s < 0 || s >= spec.n_states || a < 0 || a >= spec.actions_per_state[s])
                fail(root + ".rewards", "invalid (s, a) pair");
            bool matched = false;
            for (auto& o : spec.rows[spec.row_index(s, a)])
                if (o.next == s2) {
                    o.reward = r;
                    matched = true;
                }
            if (!matched) fail(root + ".rewards", "reward for a transition with no entry");
        }
    }

    spec.start_state = get_field<StateId>(j, root, "start_state");
    if (j.contains("interaction_states")) {
        spec.interaction_states = get_field<std::vector<StateId>>(j, root, "interaction_states");
        std::sort(spec.interaction_states.begin(), spec.interaction_states.end());
    }
    if (j.contains("gamma_reference"))
        spec.gamma_reference = get_field<double>(j, root, "gamma_reference");
    if (j.contains("misrepresented"))
        spec.misrepresented = get_field<bool>(j, root, "misrepresented");

    if (j.contains("arm_modulation") && !j.at("arm_modulation").is_null()) {
        const json& am = j.at("arm_modulation");
        const std::string path = root + ".arm_modulation";
        ArmTable t;
        t.n_arms = get_field<int>(am, path, "n_arms");
        t.user_reward_mean = get_field<std::vector<double>>(am, path, "user_reward_mean");
        t.accept_probability = get_field<std::vector<double>>(am, path, "accept_probability");
        t.aftereffect_shift = get_field<std::vector<double>>(am, path, "aftereffect_shift");
        if (am.contains("modulated_states"))
            t.modulated_states = get_field<std::vector<StateId>>(am, path, "modulated_states");
        spec.arm_modulation = std::move(t);
    }

    if (auto rep = validate_spec(spec); !rep.ok())
        throw std::invalid_argument(root + ": invariant violations:\n" + rep.to_string());
    return spec;
}

} // namespace socsim
