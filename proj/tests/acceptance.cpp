// Acceptance suite: one test case and one printed PASS/FAIL line per
// criterion. Run via ctest (-R acceptance) or directly; the binary needs the
// SOCSIM_CLI environment variable for the CLI determinism check.

#include <doctest.h>

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "socsim/config.hpp"
#include "socsim/csv.hpp"
#include "socsim/harness.hpp"

using namespace socsim;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int criterion, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d  %-28s %s\n", ok ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

ExperimentConfig refined_defaults() {
    ExperimentConfig cfg;
    cfg.level = EnvironmentLevel::RefinedRecommender;
    return cfg; // horizon 1000, n_replications 900, documented defaults
}

int first_reach(const BatchResult& r, int threshold) {
    for (int t = 0; t < r.horizon; ++t)
        if (r.non_addicted[t] >= threshold) return t;
    return r.horizon + 1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("criterion 1: value-iteration oracle equivalence") {
    const auto t0 = std::chrono::steady_clock::now();
    RandomStream rng(404040);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto spec = test::random_mdp(rng, 5, 3);
        const auto vi = optimal_q(spec, 0.9, 1e-9);
        const auto brute = test::enumerate_optimal_q(spec, 0.9);
        worst = std::max(worst, test::max_abs_diff(vi, brute));
    }
    const double secs = seconds_since(t0);
    const bool ok = worst < 1e-6 && secs < 10.0;
    report(1, "value-iteration oracle", ok, fmt("max err %.2e on 100 MDPs, %.2fs", worst, secs));
    CHECK(worst < 1e-6);
    CHECK(secs < 10.0);
}

TEST_CASE("criterion 2: Q-learning convergence on a deterministic chain") {
    const auto t0 = std::chrono::steady_clock::now();
    EnvironmentSpec spec;
    spec.n_states = 3;
    spec.state_labels = {"c0", "c1", "c2"};
    spec.actions_per_state = {2, 2, 2};
    spec.rows = {{{1, 1.0, 0.0}}, {{0, 1.0, 0.0}},
                 {{2, 1.0, 0.0}}, {{1, 1.0, 0.0}},
                 {{0, 1.0, 1.0}}, {{2, 1.0, 0.0}}};
    spec.start_state = 0;
    spec.finalize();
    const auto q_star = optimal_q(spec, 0.9, 1e-10);

    DualConfig dual;
    dual.beta = 0.0;
    dual.epsilon = 0.1;
    dual.epsilon_decay = 1.0;
    dual.epsilon_min = 0.1;
    auto agent = make_agent(spec, dual, 0.1, 0.9, 0, ModelMode::LearnedModel);
    RandomStream rng(777);
    StateId s = spec.start_state;
    for (int t = 0; t < 10000; ++t) {
        const ActionId a = select_action(agent, s, rng);
        const auto out = step(spec, s, a, rng);
        mf_update(agent.mf, s, a, out.reward, out.next);
        s = out.next;
    }
    const double err = test::max_abs_diff(agent.mf.q, q_star);
    const double secs = seconds_since(t0);
    const bool ok = err < 1e-2 && secs < 1.0;
    report(2, "Q-learning convergence", ok, fmt("max err %.2e after 1e4 steps, %.2fs", err, secs));
    CHECK(err < 1e-2);
    CHECK(secs < 1.0);
}

TEST_CASE("criterion 3: bandit exponential-recency closed form") {
    auto b = make_bandit(1, 0.1, 0.0, 0.0);
    double worst = 0.0;
    for (int t = 1; t <= 100; ++t) {
        bandit_update(b, 0, 1.0);
        worst = std::max(worst, std::fabs(b.q_arms[0] - (1.0 - std::pow(0.9, t))));
    }
    const bool ok = worst <= 1e-12;
    report(3, "bandit closed form", ok, fmt("max dev %.2e over t<=100", worst));
    CHECK(worst <= 1e-12);
}

TEST_CASE("criterion 4: beta effect on final non-addicted count") {
    const auto t0 = std::chrono::steady_clock::now();
    auto lo = refined_defaults();
    lo.agent.beta = 0.25;
    auto hi = refined_defaults();
    hi.agent.beta = 0.75;
    const auto r_lo = run_batch(lo);
    const auto r_hi = run_batch(hi);
    const int diff = r_hi.non_addicted.back() - r_lo.non_addicted.back();
    const double secs = seconds_since(t0);
    const bool ok = diff >= 90 && secs < 120.0;
    report(4, "beta blend effect", ok,
           fmt("final non-addicted %d (b=.25) vs %d (b=.75), diff %d >= 90, %.1fs",
               r_lo.non_addicted.back(), r_hi.non_addicted.back(), diff, secs));
    CHECK(diff >= 90);
    CHECK(secs < 120.0);
}

TEST_CASE("criterion 5: MBUS planning-budget speed") {
    auto cfg = refined_defaults();
    cfg.agent.beta = 0.5;
    cfg.agent.model_mode = ModelMode::KnownModel;
    cfg.agent.mbus = 1;
    const int t1 = first_reach(run_batch(cfg), 450);
    cfg.agent.mbus = 50;
    const int t50 = first_reach(run_batch(cfg), 450);
    const bool ok = t50 < t1;
    report(5, "planning-budget speed", ok,
           fmt("iterations to 450 non-addicted: mbus=1 -> %d, mbus=50 -> %d", t1, t50));
    CHECK(t50 < t1);
}

TEST_CASE("criterion 6: recommender arm identification") {
    // Arm identification is only observable while users keep interacting:
    // the misrepresented world (users blind to Healthy) with punitive
    // rejections and a well-explored bandit (epsilon_r 0.3).
    auto cfg = refined_defaults();
    cfg.misrepresentation.enabled = true;
    cfg.recommender.rejection_scheme = RejectionScheme::Punitive;
    cfg.recommender.epsilon_r = 0.3;
    std::vector<ReplicationTrace> traces;
    const auto result = run_batch(cfg, &traces);

    const int n_arms = result.n_arms;
    const int last = result.horizon - 1;
    std::vector<double> mean(n_arms);
    for (int k = 0; k < n_arms; ++k)
        mean[k] = result.mean_q_arms[static_cast<std::size_t>(last) * n_arms + k];

    bool mean_top = true, mean_order = true;
    for (int k = 0; k < n_arms - 1; ++k) {
        if (mean[k] >= mean[n_arms - 1]) mean_top = false;
        if (mean[k] >= mean[k + 1]) mean_order = false;
    }
    int per_rep_top = 0;
    for (const auto& tr : traces) {
        const auto& q = tr.q_arms_final;
        bool top = true;
        for (int k = 0; k < n_arms - 1; ++k)
            if (q[k] >= q[n_arms - 1]) top = false;
        if (top) per_rep_top++;
    }
    const double top_rate = static_cast<double>(per_rep_top) / result.n_replications;
    const bool ok = mean_top && mean_order && top_rate >= 0.95;
    report(6, "recommender arm learning", ok,
           fmt("mean q [%.3f %.3f %.3f %.3f] ordered=%s; per-replication top-arm %.1f%% (need >=95%%)",
               mean[0], mean[1], mean[2], mean[3], mean_order ? "yes" : "no", 100.0 * top_rate));
    CHECK(mean_top);
    CHECK(mean_order);
    CHECK(top_rate >= 0.95);
}

TEST_CASE("criterion 7: misrepresentation increases addiction") {
    bool all_ok = true;
    std::string detail;
    for (double beta : {0.0, 0.5}) {
        auto cfg = refined_defaults();
        cfg.agent.beta = beta;
        const auto base = run_batch(cfg);
        cfg.misrepresentation.enabled = true;
        const auto mis = run_batch(cfg);
        const int margin = base.non_addicted.back() - mis.non_addicted.back();
        all_ok = all_ok && margin >= 45;
        detail += fmt("b=%.1f margin %d; ", beta, margin);
        CHECK(margin >= 45);
    }
    report(7, "misrepresentation harm", all_ok, detail + "need >= 45");
}

TEST_CASE("criterion 8: perfect knowledge avoids addiction") {
    auto cfg = refined_defaults();
    cfg.agent.beta = 1.0;
    cfg.agent.model_mode = ModelMode::KnownModel;
    cfg.agent.mbus = 200;
    cfg.agent.epsilon = 0.0;
    cfg.agent.epsilon_min = 0.0;
    cfg.horizon = 300;
    const auto result = run_batch(cfg);
    const int addicted = result.n_replications - result.non_addicted.back();
    const bool ok = addicted == 0;
    report(8, "perfect-knowledge sanity", ok, fmt("final addicted count %d", addicted));
    CHECK(addicted == 0);
}

TEST_CASE("criterion 9: byte-identical CSVs across SIM_THREADS") {
    const char* cli = std::getenv("SOCSIM_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "SOCSIM_CLI must point at the socsim binary");

    const auto dir = std::filesystem::temp_directory_path() / "socsim-acceptance-c9";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream cfg(dir / "config.json");
        cfg << R"({"level": "refined", "horizon": 500, "n_replications": 150})" << "\n";
    }
    auto run_with = [&](const char* threads, const char* out) {
        const std::string cmd = std::string("SIM_THREADS=") + threads + " '" + cli + "' run -c '" +
                                (dir / "config.json").string() + "' -o '" + (dir / out).string() +
                                "' > /dev/null";
        return std::system(cmd.c_str());
    };
    REQUIRE(run_with("1", "a") == 0);
    REQUIRE(run_with("4", "b") == 0);

    bool ok = true;
    for (const char* name : {"agents_evolution.csv", "recommender_q.csv", "resolved_config.json"})
        ok = ok && slurp(dir / "a" / name) == slurp(dir / "b" / name) &&
             !slurp(dir / "a" / name).empty();
    report(9, "SIM_THREADS determinism", ok, ok ? "outputs byte-identical" : "outputs differ");
    CHECK(ok);
}

TEST_CASE("criterion 10: default replication count is 900") {
    const auto cfg = parse_config(nlohmann::json{{"level", "refined"}});
    const auto resolved = to_resolved_json(cfg);
    const bool ok = cfg.n_replications == 900 && resolved.at("n_replications") == 900;
    report(10, "config-N fidelity", ok,
           fmt("resolved_config.json n_replications = %d", int(resolved.at("n_replications"))));
    CHECK(ok);
}
