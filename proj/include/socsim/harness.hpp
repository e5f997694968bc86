#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "socsim/agent.hpp"
#include "socsim/bandit.hpp"
#include "socsim/environments.hpp"

namespace socsim {

enum class MisrepresentationTarget { Environment, MbModel };
enum class ArmRefresh { PerStep, PerEntry };

struct AgentConfig {
    double alpha = 0.1;
    double gamma = 0.9;
    double beta = 0.75;
    double epsilon = 0.3;
    double epsilon_decay = 0.999;
    double epsilon_min = 0.01;
    int mbus = 1;
    ModelMode model_mode = ModelMode::LearnedModel;
    double tie_tol = 1e-9;
};

struct RecommenderConfig {
    int n_arms = 0; // 0 = take from the environment's arm table, else 4
    double eta = 0.05;
    double epsilon_r = 0.1;
    RejectionScheme rejection_scheme = RejectionScheme::Neutral;
    double q_init = 0.0;
    ArmRefresh arm_refresh = ArmRefresh::PerStep;
};

struct MisrepresentationConfig {
    bool enabled = false;
    MisrepresentationTarget target = MisrepresentationTarget::Environment;
};

struct SweepSpec {
    std::vector<double> beta;
    std::vector<int> mbus;
    bool empty() const { return beta.empty() && mbus.empty(); }
};

struct ExperimentConfig {
    EnvironmentLevel level = EnvironmentLevel::Simplified;
    MisrepresentationConfig misrepresentation;
    AgentConfig agent;
    RecommenderConfig recommender;
    int horizon = 1000;
    int n_replications = 900;
    std::uint64_t base_seed = 123456789;
    SweepSpec sweep;
    // Set by config loading when environment_overrides are present; replaces
    // the level's built-in spec.
    std::optional<EnvironmentSpec> custom_environment;
    // Fully resolved JSON echo (filled by cli-io; empty for programmatic use).
    std::string resolved_json;
};

struct StepRecord {
    StateId state;
    int arm; // -1 when the recommender was not active this step
    ActionId action;
    double user_reward;
    double rec_reward;
    bool rec_active;
    bool addicted;
};

struct ReplicationTrace {
    std::uint64_t seed = 0;
    int n_arms = 0;
    std::vector<StepRecord> steps;      // exactly horizon records
    std::vector<double> bandit_values;  // horizon * n_arms, row-major by iteration
    QTable q_mf_final;
    QTable q_mb_final;
    std::vector<double> q_arms_final;
    std::vector<long long> pull_counts_final;
    double epsilon_final = 0.0;
};

struct BatchResult {
    int horizon = 0;
    int n_replications = 0;
    int n_arms = 0;
    bool has_arm_table = false;
    std::vector<int> non_addicted;    // per iteration
    std::vector<double> mean_q_arms;  // horizon * n_arms, row-major
    std::string resolved_json;

    friend bool operator==(const BatchResult&, const BatchResult&) = default;
};

// Everything shared by the replications of one batch: the (possibly
// misrepresented) world, and the unmodified reference that defines addiction.
struct ReplicationContext {
    EnvironmentSpec world;
    EnvironmentSpec reference;
    QTable reference_q;
    ReferencePolicy reference_policy;
    std::optional<StateId> hidden_state; // mb_model misrepresentation
    int n_arms = 0;
};

// Validates the config and environment; throws std::invalid_argument with the
// offending field on failure.
ReplicationContext make_context(const ExperimentConfig& cfg);

// One seeded end-to-end user/recommender simulation over the full horizon.
// The trace is a pure function of (cfg, seed).
ReplicationTrace run_replication(const ExperimentConfig& cfg, std::uint64_t seed);
ReplicationTrace run_replication(const ReplicationContext& ctx, const ExperimentConfig& cfg,
                                 std::uint64_t seed);

// Runs n_replications replications with seeds derive_seed(base_seed, i) and
// aggregates the two metric families. OpenMP-parallel over replications; the
// reduction runs in replication-index order, so the result is bit-identical
// for every thread count (SIM_THREADS, 0 = auto). `traces`, when given, is
// filled with all full traces (large).
BatchResult run_batch(const ExperimentConfig& cfg, std::vector<ReplicationTrace>* traces = nullptr);

// Single-threaded reference implementation, kept verbatim for testing and the
// benchmark; must produce results identical to run_batch.
BatchResult run_batch_serial(const ExperimentConfig& cfg,
                             std::vector<ReplicationTrace>* traces = nullptr);

// One resolved parameter combination of a sweep.
struct SweepCombo {
    std::string name; // sorted key=value pairs joined with '_'
    ExperimentConfig config;
};

// Cartesian product over the sweep values (beta-major, mbus-minor); every
// combination keeps the same base_seed for paired comparisons. Throws when
// the sweep map is empty.
std::vector<SweepCombo> sweep_combinations(const ExperimentConfig& cfg);

// Convenience wrapper running run_batch on every combination.
std::vector<std::pair<std::string, BatchResult>> run_sweep(const ExperimentConfig& cfg);

// Worker cap from the SIM_THREADS environment variable (0 or unset = auto).
int resolve_thread_count();

} // namespace socsim
