#include "socsim/config.hpp"

#include <fstream>

#include "socsim/spec_io.hpp"

namespace socsim {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid config:";
    for (const auto& e : errors) out += "\n  " + e;
    return out;
}

class Parser {
public:
    explicit Parser(const json& root) : root_(root) {}

    std::vector<std::string> errors;

    const json* section(const char* key) {
        if (!root_.contains(key)) return nullptr;
        const json& j = root_.at(key);
        if (!j.is_object()) {
            errors.push_back(std::string(key) + ": must be an object");
            return nullptr;
        }
        return &j;
    }

    template <typename T>
    void read(const json* j, const std::string& path, const char* key, T& out) {
        if (!j || !j->contains(key)) return;
        try {
            out = j->at(key).get<T>();
        } catch (const json::exception&) {
            errors.push_back(path + "." + key + ": wrong type");
        }
    }

    void check(bool ok, const std::string& path, const std::string& rule) {
        if (!ok) errors.push_back(path + ": " + rule);
    }

    void reject_unknown(const json* j, const std::string& path,
                        std::initializer_list<const char*> known) {
        if (!j) return;
        for (auto it = j->begin(); it != j->end(); ++it) {
            bool found = false;
            for (const char* k : known)
                if (it.key() == k) found = true;
            if (!found) errors.push_back(path + "." + it.key() + ": unknown field");
        }
    }

private:
    const json& root_;
};

} // namespace

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error(join_errors(errs)), errors_(std::move(errs)) {}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError({"config: root must be a JSON object"});

    Parser p(j);
    p.reject_unknown(&j, "config",
                     {"level", "misrepresentation", "agent", "recommender",
                      "environment_overrides", "horizon", "n_replications", "base_seed", "sweep"});

    ExperimentConfig cfg;

    std::string level;
    p.read(&j, "config", "level", level);
    if (level == "simplified") cfg.level = EnvironmentLevel::Simplified;
    else if (level == "advanced") cfg.level = EnvironmentLevel::Advanced;
    else if (level == "refined") cfg.level = EnvironmentLevel::RefinedRecommender;
    else p.errors.push_back("level: must be one of simplified|advanced|refined");

    if (const json* m = p.section("misrepresentation")) {
        p.reject_unknown(m, "misrepresentation", {"enabled", "target"});
        p.read(m, "misrepresentation", "enabled", cfg.misrepresentation.enabled);
        std::string target = "environment";
        p.read(m, "misrepresentation", "target", target);
        if (target == "environment")
            cfg.misrepresentation.target = MisrepresentationTarget::Environment;
        else if (target == "mb_model")
            cfg.misrepresentation.target = MisrepresentationTarget::MbModel;
        else p.errors.push_back("misrepresentation.target: must be environment|mb_model");
    }

    if (const json* a = p.section("agent")) {
        p.reject_unknown(a, "agent",
                         {"alpha", "gamma", "beta", "epsilon", "epsilon_decay", "epsilon_min",
                          "mbus", "model_mode", "tie_tol"});
        p.read(a, "agent", "alpha", cfg.agent.alpha);
        p.read(a, "agent", "gamma", cfg.agent.gamma);
        p.read(a, "agent", "beta", cfg.agent.beta);
        p.read(a, "agent", "epsilon", cfg.agent.epsilon);
        p.read(a, "agent", "epsilon_decay", cfg.agent.epsilon_decay);
        p.read(a, "agent", "epsilon_min", cfg.agent.epsilon_min);
        p.read(a, "agent", "mbus", cfg.agent.mbus);
        p.read(a, "agent", "tie_tol", cfg.agent.tie_tol);
        std::string mode = "learned";
        p.read(a, "agent", "model_mode", mode);
        if (mode == "learned") cfg.agent.model_mode = ModelMode::LearnedModel;
        else if (mode == "known") cfg.agent.model_mode = ModelMode::KnownModel;
        else p.errors.push_back("agent.model_mode: must be learned|known");
    }

    if (const json* r = p.section("recommender")) {
        p.reject_unknown(r, "recommender",
                         {"n_arms", "eta", "epsilon_r", "rejection_scheme", "q_init", "arm_refresh"});
        p.read(r, "recommender", "n_arms", cfg.recommender.n_arms);
        p.read(r, "recommender", "eta", cfg.recommender.eta);
        p.read(r, "recommender", "epsilon_r", cfg.recommender.epsilon_r);
        p.read(r, "recommender", "q_init", cfg.recommender.q_init);
        std::string scheme = "neutral";
        p.read(r, "recommender", "rejection_scheme", scheme);
        if (scheme == "neutral") cfg.recommender.rejection_scheme = RejectionScheme::Neutral;
        else if (scheme == "punitive") cfg.recommender.rejection_scheme = RejectionScheme::Punitive;
        else p.errors.push_back("recommender.rejection_scheme: must be neutral|punitive");
        std::string refresh = "per_step";
        p.read(r, "recommender", "arm_refresh", refresh);
        if (refresh == "per_step") cfg.recommender.arm_refresh = ArmRefresh::PerStep;
        else if (refresh == "per_entry") cfg.recommender.arm_refresh = ArmRefresh::PerEntry;
        else p.errors.push_back("recommender.arm_refresh: must be per_step|per_entry");
    }

    p.read(&j, "config", "horizon", cfg.horizon);
    p.read(&j, "config", "n_replications", cfg.n_replications);
    p.read(&j, "config", "base_seed", cfg.base_seed);

    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        if (!sw.is_object()) {
            p.errors.push_back("sweep: must be an object");
        } else {
            p.reject_unknown(&sw, "sweep", {"beta", "mbus"});
            p.read(&sw, "sweep", "beta", cfg.sweep.beta);
            p.read(&sw, "sweep", "mbus", cfg.sweep.mbus);
            if (sw.contains("beta") && cfg.sweep.beta.empty())
                p.errors.push_back("sweep.beta: must be a non-empty list");
            if (sw.contains("mbus") && cfg.sweep.mbus.empty())
                p.errors.push_back("sweep.mbus: must be a non-empty list");
            for (double b : cfg.sweep.beta)
                p.check(b >= 0.0 && b <= 1.0, "sweep.beta", "value out of range [0,1]");
            for (int m : cfg.sweep.mbus) p.check(m >= 0, "sweep.mbus", "value must be >= 0");
        }
    }

    // Range rules, reported with their JSON paths.
    p.check(cfg.agent.alpha > 0.0 && cfg.agent.alpha <= 1.0, "agent.alpha", "out of range (0,1]");
    p.check(cfg.agent.gamma >= 0.0 && cfg.agent.gamma < 1.0, "agent.gamma", "out of range [0,1)");
    p.check(cfg.agent.beta >= 0.0 && cfg.agent.beta <= 1.0, "agent.beta", "out of range [0,1]");
    p.check(cfg.agent.epsilon >= 0.0 && cfg.agent.epsilon <= 1.0, "agent.epsilon",
            "out of range [0,1]");
    p.check(cfg.agent.epsilon_decay > 0.0 && cfg.agent.epsilon_decay <= 1.0, "agent.epsilon_decay",
            "out of range (0,1]");
    p.check(cfg.agent.epsilon_min >= 0.0 && cfg.agent.epsilon_min <= cfg.agent.epsilon,
            "agent.epsilon_min", "out of range [0, epsilon]");
    p.check(cfg.agent.mbus >= 0, "agent.mbus", "must be >= 0");
    p.check(cfg.agent.tie_tol >= 0.0, "agent.tie_tol", "must be >= 0");
    p.check(cfg.recommender.n_arms >= 0, "recommender.n_arms", "must be >= 1 when given");
    p.check(cfg.recommender.eta > 0.0 && cfg.recommender.eta <= 1.0, "recommender.eta",
            "out of range (0,1]");
    p.check(cfg.recommender.epsilon_r >= 0.0 && cfg.recommender.epsilon_r <= 1.0,
            "recommender.epsilon_r", "out of range [0,1]");
    p.check(cfg.horizon >= 1, "horizon", "must be >= 1");
    p.check(cfg.n_replications >= 1, "n_replications", "must be >= 1");

    if (!p.errors.empty()) throw ConfigError(std::move(p.errors));

    if (j.contains("environment_overrides")) {
        const json& ov = j.at("environment_overrides");
        if (!ov.is_object()) throw ConfigError({"environment_overrides: must be an object"});
        json base = env_to_json(build_level(cfg.level));
        for (auto it = ov.begin(); it != ov.end(); ++it) base[it.key()] = it.value();
        try {
            cfg.custom_environment = env_from_json(base);
        } catch (const std::invalid_argument& e) {
            throw ConfigError({std::string("environment_overrides: ") + e.what()});
        }
    }

    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file: " + path.string()});
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("malformed JSON: ") + e.what()});
    }
    ExperimentConfig cfg = parse_config(j);
    attach_resolved_json(cfg);
    return cfg;
}

json to_resolved_json(const ExperimentConfig& cfg) {
    json j;
    j["level"] = to_string(cfg.level);
    j["misrepresentation"] = {
        {"enabled", cfg.misrepresentation.enabled},
        {"target", cfg.misrepresentation.target == MisrepresentationTarget::Environment
                       ? "environment"
                       : "mb_model"}};
    j["agent"] = {{"alpha", cfg.agent.alpha},
                  {"gamma", cfg.agent.gamma},
                  {"beta", cfg.agent.beta},
                  {"epsilon", cfg.agent.epsilon},
                  {"epsilon_decay", cfg.agent.epsilon_decay},
                  {"epsilon_min", cfg.agent.epsilon_min},
                  {"mbus", cfg.agent.mbus},
                  {"model_mode", cfg.agent.model_mode == ModelMode::LearnedModel ? "learned" : "known"},
                  {"tie_tol", cfg.agent.tie_tol}};

    const EnvironmentSpec env =
        cfg.custom_environment ? *cfg.custom_environment : build_level(cfg.level);
    const int n_arms = env.arm_modulation ? env.arm_modulation->n_arms
                       : cfg.recommender.n_arms > 0 ? cfg.recommender.n_arms
                                                    : 4;
    j["recommender"] = {
        {"n_arms", n_arms},
        {"eta", cfg.recommender.eta},
        {"epsilon_r", cfg.recommender.epsilon_r},
        {"rejection_scheme",
         cfg.recommender.rejection_scheme == RejectionScheme::Neutral ? "neutral" : "punitive"},
        {"q_init", cfg.recommender.q_init},
        {"arm_refresh", cfg.recommender.arm_refresh == ArmRefresh::PerStep ? "per_step" : "per_entry"}};

    j["horizon"] = cfg.horizon;
    j["n_replications"] = cfg.n_replications;
    j["base_seed"] = cfg.base_seed;
    if (!cfg.sweep.empty()) {
        json sw = json::object();
        if (!cfg.sweep.beta.empty()) sw["beta"] = cfg.sweep.beta;
        if (!cfg.sweep.mbus.empty()) sw["mbus"] = cfg.sweep.mbus;
        j["sweep"] = std::move(sw);
    }
    if (cfg.custom_environment) j["environment_overrides"] = env_to_json(*cfg.custom_environment);
    return j;
}

void attach_resolved_json(ExperimentConfig& cfg) {
    cfg.resolved_json = to_resolved_json(cfg).dump(2) + "\n";
}

} // namespace socsim
