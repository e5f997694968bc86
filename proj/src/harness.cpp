#include "socsim/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace socsim {

namespace {

constexpr double kReferenceTol = 1e-8;

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

} // namespace

ReplicationContext make_context(const ExperimentConfig& cfg) {
    require(cfg.horizon >= 1, "horizon must be >= 1");
    require(cfg.n_replications >= 1, "n_replications must be >= 1");
    require(cfg.agent.alpha > 0.0 && cfg.agent.alpha <= 1.0, "agent.alpha out of range (0,1]");
    require(cfg.agent.gamma >= 0.0 && cfg.agent.gamma < 1.0, "agent.gamma out of range [0,1)");
    require(cfg.agent.beta >= 0.0 && cfg.agent.beta <= 1.0, "agent.beta out of range [0,1]");
    require(cfg.agent.epsilon >= 0.0 && cfg.agent.epsilon <= 1.0, "agent.epsilon out of range [0,1]");
    require(cfg.agent.epsilon_decay > 0.0 && cfg.agent.epsilon_decay <= 1.0,
            "agent.epsilon_decay out of range (0,1]");
    require(cfg.agent.epsilon_min >= 0.0 && cfg.agent.epsilon_min <= cfg.agent.epsilon,
            "agent.epsilon_min out of range [0, epsilon]");
    require(cfg.agent.mbus >= 0, "agent.mbus must be >= 0");
    require(cfg.agent.tie_tol >= 0.0, "agent.tie_tol must be >= 0");
    require(cfg.recommender.eta > 0.0 && cfg.recommender.eta <= 1.0,
            "recommender.eta out of range (0,1]");
    require(cfg.recommender.epsilon_r >= 0.0 && cfg.recommender.epsilon_r <= 1.0,
            "recommender.epsilon_r out of range [0,1]");
    require(cfg.recommender.n_arms >= 0, "recommender.n_arms must be >= 0");

    ReplicationContext ctx;
    ctx.reference = cfg.custom_environment ? *cfg.custom_environment : build_level(cfg.level);
    ctx.reference.misrepresented = false;
    if (auto rep = validate_spec(ctx.reference); !rep.ok())
        throw std::invalid_argument("environment spec invalid:\n" + rep.to_string());

    ctx.world = ctx.reference;
    if (cfg.misrepresentation.enabled) {
        if (cfg.misrepresentation.target == MisrepresentationTarget::Environment) {
            ctx.world = apply_misrepresentation(ctx.reference);
            if (auto rep = validate_spec(ctx.world); !rep.ok())
                throw std::invalid_argument("misrepresented spec invalid:\n" + rep.to_string());
        } else {
            const StateId healthy = ctx.reference.find_label("Healthy");
            require(healthy >= 0, "mb_model misrepresentation needs a Healthy state");
            ctx.hidden_state = healthy;
        }
    }

    if (ctx.world.arm_modulation) {
        const int env_arms = ctx.world.arm_modulation->n_arms;
        require(cfg.recommender.n_arms == 0 || cfg.recommender.n_arms == env_arms,
                "recommender.n_arms conflicts with the environment's arm table");
        ctx.n_arms = env_arms;
    } else {
        ctx.n_arms = cfg.recommender.n_arms > 0 ? cfg.recommender.n_arms : 4;
    }

    // Addiction is always judged against the unmodified world.
    ctx.reference_q = optimal_q(ctx.reference, ctx.reference.gamma_reference, kReferenceTol);
    ctx.reference_policy = make_reference(ctx.reference_q, cfg.agent.tie_tol);
    return ctx;
}

ReplicationTrace run_replication(const ReplicationContext& ctx, const ExperimentConfig& cfg,
                                 std::uint64_t seed) {
    const EnvironmentSpec& world = ctx.world;
    const int horizon = cfg.horizon;

    RandomStream rng(seed);
    DualConfig dual{cfg.agent.beta, cfg.agent.epsilon, cfg.agent.epsilon_decay,
                    cfg.agent.epsilon_min, cfg.agent.tie_tol};
    DualAgent agent = make_agent(world, dual, cfg.agent.alpha, cfg.agent.gamma, cfg.agent.mbus,
                                 cfg.agent.model_mode, ctx.hidden_state);
    BanditState bandit = make_bandit(ctx.n_arms, cfg.recommender.eta, cfg.recommender.epsilon_r,
                                     cfg.recommender.q_init);

    ReplicationTrace trace;
    trace.seed = seed;
    trace.n_arms = ctx.n_arms;
    trace.steps.reserve(static_cast<std::size_t>(horizon));
    trace.bandit_values.resize(static_cast<std::size_t>(horizon) * ctx.n_arms);

    std::vector<Outcome> scratch_row;
    StateId state = world.start_state;
    bool was_in_interaction = false;
    int held_arm = -1;

    for (int t = 0; t < horizon; ++t) {
        const bool rec_active = world.is_interaction(state);
        int arm = -1;
        if (rec_active) {
            const bool refresh = cfg.recommender.arm_refresh == ArmRefresh::PerStep ||
                                 !was_in_interaction || held_arm < 0;
            arm = refresh ? select_arm(bandit, rng) : held_arm;
            held_arm = arm;
        }

        ActionId action = select_action(agent, state, rng);

        // Content gate: an agent willing to scroll accepts this arm's content
        // with the arm's accept probability, otherwise it puts the phone down.
        const bool modulated = rec_active && world.arm_modulation;
        if (modulated && action == kEngageAction) {
            const ActionId quit = quit_action(world, state);
            if (quit != kEngageAction &&
                !rng.bernoulli(world.arm_modulation->accept_probability[arm]))
                action = quit;
        }

        StepOutcome out;
        if (modulated && action == kEngageAction) {
            arm_modulated_row_into(world, state, action, arm, scratch_row);
            out = sample_outcome(scratch_row, rng);
        } else {
            out = sample_outcome(world.row(state, action), rng);
        }

        mf_update(agent.mf, state, action, out.reward, out.next);
        mb_observe(agent.mb, state, action, out.reward, out.next);
        mb_plan(agent.mb);

        double rec_reward = 0.0;
        if (rec_active) {
            const bool accepted = action == kEngageAction;
            rec_reward = reward_from_interaction(accepted, cfg.recommender.rejection_scheme);
            bandit_update(bandit, arm, rec_reward);
        }

        const bool addicted = is_addicted(agent, ctx.reference_policy);

        trace.steps.push_back({state, arm, action, out.reward, rec_reward, rec_active, addicted});
        for (int k = 0; k < ctx.n_arms; ++k)
            trace.bandit_values[static_cast<std::size_t>(t) * ctx.n_arms + k] = bandit.q_arms[k];

        agent.cfg.epsilon = std::max(cfg.agent.epsilon_min,
                                     agent.cfg.epsilon * cfg.agent.epsilon_decay);
        was_in_interaction = rec_active;
        state = out.next;
    }

    trace.q_mf_final = agent.mf.q;
    trace.q_mb_final = agent.mb.q;
    trace.q_arms_final = bandit.q_arms;
    trace.pull_counts_final = bandit.pull_counts;
    trace.epsilon_final = agent.cfg.epsilon;
    return trace;
}

ReplicationTrace run_replication(const ExperimentConfig& cfg, std::uint64_t seed) {
    return run_replication(make_context(cfg), cfg, seed);
}

namespace {

BatchResult reduce_traces(const ExperimentConfig& cfg, const ReplicationContext& ctx,
                          const std::vector<ReplicationTrace>& traces) {
    BatchResult result;
    result.horizon = cfg.horizon;
    result.n_replications = cfg.n_replications;
    result.n_arms = ctx.n_arms;
    result.has_arm_table = ctx.world.arm_modulation.has_value();
    result.resolved_json = cfg.resolved_json;
    result.non_addicted.assign(static_cast<std::size_t>(cfg.horizon), 0);
    result.mean_q_arms.assign(static_cast<std::size_t>(cfg.horizon) * ctx.n_arms, 0.0);

    // Fixed accumulation order (replication-major) keeps the floating-point
    // sums identical across thread counts and execution orders.
    for (const auto& trace : traces) {
        for (int t = 0; t < cfg.horizon; ++t)
            result.non_addicted[t] += trace.steps[t].addicted ? 0 : 1;
        for (std::size_t i = 0; i < trace.bandit_values.size(); ++i)
            result.mean_q_arms[i] += trace.bandit_values[i];
    }
    const double inv = 1.0 / static_cast<double>(cfg.n_replications);
    for (double& v : result.mean_q_arms) v *= inv;
    return result;
}

BatchResult run_batch_impl(const ExperimentConfig& cfg, std::vector<ReplicationTrace>* traces_out,
                           bool parallel) {
    const ReplicationContext ctx = make_context(cfg);
    std::vector<ReplicationTrace> traces(static_cast<std::size_t>(cfg.n_replications));

    if (parallel) {
#ifdef _OPENMP
        const int threads = resolve_thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int i = 0; i < cfg.n_replications; ++i)
            traces[i] = run_replication(ctx, cfg, derive_seed(cfg.base_seed, i));
#else
        for (int i = 0; i < cfg.n_replications; ++i)
            traces[i] = run_replication(ctx, cfg, derive_seed(cfg.base_seed, i));
#endif
    } else {
        for (int i = 0; i < cfg.n_replications; ++i)
            traces[i] = run_replication(ctx, cfg, derive_seed(cfg.base_seed, i));
    }

    BatchResult result = reduce_traces(cfg, ctx, traces);
    if (traces_out) *traces_out = std::move(traces);
    return result;
}

} // namespace

BatchResult run_batch(const ExperimentConfig& cfg, std::vector<ReplicationTrace>* traces) {
    return run_batch_impl(cfg, traces, true);
}

BatchResult run_batch_serial(const ExperimentConfig& cfg, std::vector<ReplicationTrace>* traces) {
    return run_batch_impl(cfg, traces, false);
}

namespace {

std::string combo_name(const std::optional<double>& beta, const std::optional<int>& mbus) {
    std::string name;
    if (beta) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "beta=%.17g", *beta);
        name = buf;
    }
    if (mbus) {
        if (!name.empty()) name += '_';
        name += "mbus=" + std::to_string(*mbus);
    }
    return name;
}

} // namespace

std::vector<SweepCombo> sweep_combinations(const ExperimentConfig& cfg) {
    if (cfg.sweep.empty())
        throw std::invalid_argument("sweep_combinations: sweep map is empty");

    std::vector<std::optional<double>> betas;
    std::vector<std::optional<int>> mbuses;
    if (cfg.sweep.beta.empty()) betas.push_back(std::nullopt);
    else for (double b : cfg.sweep.beta) betas.emplace_back(b);
    if (cfg.sweep.mbus.empty()) mbuses.push_back(std::nullopt);
    else for (int m : cfg.sweep.mbus) mbuses.emplace_back(m);

    std::vector<SweepCombo> combos;
    for (const auto& b : betas) {
        for (const auto& m : mbuses) {
            ExperimentConfig combo = cfg;
            combo.sweep = {};
            combo.resolved_json.clear();
            if (b) combo.agent.beta = *b;
            if (m) combo.agent.mbus = *m;
            combos.push_back({combo_name(b, m), std::move(combo)});
        }
    }
    return combos;
}

std::vector<std::pair<std::string, BatchResult>> run_sweep(const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, BatchResult>> results;
    for (const auto& combo : sweep_combinations(cfg))
        results.emplace_back(combo.name, run_batch(combo.config));
    return results;
}

int resolve_thread_count() {
#ifdef _OPENMP
    int n = 0;
    if (const char* env = std::getenv("SIM_THREADS")) n = std::atoi(env);
    if (n <= 0) n = omp_get_max_threads();
    return n;
#else
    return 1;
#endif
}

} // namespace socsim
