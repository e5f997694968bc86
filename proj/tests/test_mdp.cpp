#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "socsim/mdp.hpp"

using namespace socsim;

namespace {

// 2 states, 2 actions each; handy for the validation edge cases.
EnvironmentSpec tiny_spec() {
    EnvironmentSpec spec;
    spec.n_states = 2;
    spec.state_labels = {"A", "B"};
    spec.actions_per_state = {2, 2};
    spec.rows = {
        {{0, 0.5, 1.0}, {1, 0.5, 0.0}},
        {{1, 1.0, 0.25}},
        {{0, 1.0, -1.0}},
        {{0, 0.3, 0.0}, {1, 0.7, 2.0}},
    };
    spec.start_state = 0;
    spec.gamma_reference = 0.9;
    spec.finalize();
    return spec;
}

} // namespace

TEST_CASE("validate_spec accepts a well-formed spec") {
    CHECK(validate_spec(tiny_spec()).ok());
}

TEST_CASE("validate_spec flags a row not summing to 1") {
    auto spec = tiny_spec();
    spec.rows[1] = {{1, 0.9, 0.0}};
    const auto rep = validate_spec(spec);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.violations[0].location == "transitions[s=0,a=1]");
    CHECK(rep.violations[0].rule == "row probabilities must sum to 1");
    CHECK(rep.violations[0].measured == "0.9");
}

TEST_CASE("validate_spec flags a negative probability") {
    auto spec = tiny_spec();
    spec.rows[0] = {{0, -0.1, 0.0}, {1, 1.1, 0.0}};
    const auto rep = validate_spec(spec);
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.rule == "probability out of range [0,1]" && v.measured == "-0.1") found = true;
    CHECK(found);
}

TEST_CASE("validate_spec flags unreachable states") {
    auto spec = tiny_spec();
    spec.rows[0] = {{0, 1.0, 0.0}};
    spec.rows[1] = {{0, 1.0, 0.0}};
    spec.actions_per_state = {2, 2};
    const auto rep = validate_spec(spec);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.violations[0].location == "states[1]");
}

TEST_CASE("step is deterministic on a single-outcome row") {
    const auto spec = tiny_spec();
    RandomStream rng(7);
    for (int i = 0; i < 32; ++i) {
        const auto out = step(spec, 0, 1, rng);
        CHECK(out.next == 1);
        CHECK(out.reward == 0.25);
        CHECK_FALSE(out.terminal);
    }
}

TEST_CASE("step matches the transition distribution empirically") {
    const auto spec = tiny_spec();
    RandomStream rng(42);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i)
        if (step(spec, 1, 1, rng).next == 0) ++hits;
    const double freq = static_cast<double>(hits) / n;
    CHECK(std::fabs(freq - 0.3) < 0.01);
}

TEST_CASE("step returns the exact table reward for the sampled transition") {
    const auto spec = tiny_spec();
    RandomStream rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto out = step(spec, 1, 1, rng);
        const double expected = out.next == 0 ? 0.0 : 2.0;
        CHECK(out.reward == expected);
    }
}

TEST_CASE("step sampling is reproducible for identical seeds") {
    const auto spec = tiny_spec();
    RandomStream a(99), b(99);
    for (int i = 0; i < 500; ++i) {
        const auto ra = step(spec, 0, 0, a);
        const auto rb = step(spec, 0, 0, b);
        CHECK(ra.next == rb.next);
        CHECK(ra.reward == rb.reward);
    }
}

TEST_CASE("step rejects an invalid (state, action) pair") {
    const auto spec = tiny_spec();
    RandomStream rng(1);
    CHECK_THROWS_AS(step(spec, 0, 2, rng), std::invalid_argument);
    CHECK_THROWS_AS(step(spec, 5, 0, rng), std::invalid_argument);
}

TEST_CASE("optimal_q solves the self-loop geometric series") {
    EnvironmentSpec spec;
    spec.n_states = 1;
    spec.state_labels = {"only"};
    spec.actions_per_state = {1};
    spec.rows = {{{0, 1.0, 1.0}}};
    spec.start_state = 0;
    spec.finalize();
    const auto q = optimal_q(spec, 0.9, 1e-8);
    CHECK(q.at(0, 0) == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("optimal_q with gamma=0 is the expected one-step reward") {
    const auto spec = tiny_spec();
    const auto q = optimal_q(spec, 0.0, 1e-10);
    CHECK(q.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q.at(0, 1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(q.at(1, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(q.at(1, 1) == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("optimal_q rejects bad gamma and tol") {
    const auto spec = tiny_spec();
    CHECK_THROWS_AS(optimal_q(spec, 1.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(optimal_q(spec, -0.1, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(optimal_q(spec, 0.9, 0.0), std::invalid_argument);
}

TEST_CASE("optimal_q agrees with the policy-enumeration oracle on random MDPs") {
    RandomStream rng(2024);
    for (int trial = 0; trial < 120; ++trial) {
        const auto spec = test::random_mdp(rng);
        REQUIRE(validate_spec(spec).ok());
        const auto vi = optimal_q(spec, 0.9, 1e-9);
        const auto brute = test::enumerate_optimal_q(spec, 0.9);
        CHECK(test::max_abs_diff(vi, brute) < 1e-6);
    }
}

TEST_CASE("value-iteration sweeps contract in max-norm") {
    RandomStream rng(555);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = test::random_mdp(rng);
        const double gamma = 0.9;
        QTable q(spec.actions_per_state), next = q;
        double prev_delta = -1.0;
        for (int k = 0; k < 60; ++k) {
            const double delta = bellman_sweep(spec.rows, spec.actions_per_state, gamma, q, next);
            std::swap(q, next);
            if (prev_delta >= 0.0) CHECK(delta <= gamma * prev_delta + 1e-12);
            prev_delta = delta;
        }
    }
}

TEST_CASE("greedy_policy: strict argmax, exact tie, within-tolerance tie") {
    std::vector<int> actions{2, 2, 2};
    QTable q(actions);
    q.at(0, 0) = 1.0;
    q.at(0, 1) = 2.0;
    q.at(1, 0) = 2.0;
    q.at(1, 1) = 2.0;
    q.at(2, 0) = 2.0;
    q.at(2, 1) = 2.0 - 1e-12;
    const auto policy = greedy_policy(q, 1e-9);
    CHECK(policy[0] == std::vector<ActionId>{1});
    CHECK(policy[1] == std::vector<ActionId>{0, 1});
    CHECK(policy[2] == std::vector<ActionId>{0, 1});
}

TEST_CASE("greedy_policy is invariant under positive affine maps of Q") {
    RandomStream rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto spec = test::random_mdp(rng);
        QTable q(spec.actions_per_state);
        for (double& v : q.flat()) v = rng.next_double() * 10.0 - 5.0;
        const double a = 0.5 + rng.next_double() * 4.0;
        const double b = rng.next_double() * 20.0 - 10.0;
        QTable scaled = q;
        for (double& v : scaled.flat()) v = a * v + b;
        const double tol = 1e-9;
        CHECK(greedy_policy(q, tol) == greedy_policy(scaled, a * tol));
    }
}
