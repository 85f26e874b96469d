#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ltlsyn/builtins.hpp"
#include "ltlsyn/learning.hpp"
#include "ltlsyn/oracle.hpp"
#include "ltlsyn/product.hpp"

using namespace ltlsyn;

namespace {

RewardConfig rc(double r_f, double gamma_f) {
    RewardConfig c;
    c.r_f = r_f;
    c.gamma_f = gamma_f;
    return c;
}

// Model whose initial state already carries the watched proposition; paired
// with holed_automaton every model action falls off the transition table.
PLMDP labeled_start_model() {
    PLMDP m;
    m.states = {"m0", "m1"};
    m.actions = {"go", "stay"};
    m.atomic_props = {"p"};
    m.choices.resize(2);
    m.choices[0] = {{0, {{1, 1.0}}}, {1, {{0, 1.0}}}};
    m.choices[1] = {{1, {{1, 1.0}}}};
    m.labels = {{{1, 1.0}}, {{1, 1.0}}};
    m.initial_state = 0;
    m.initial_label = 1;
    return m;
}

LDGBA holed_automaton() {
    LDGBA a;
    a.props = {"p"};
    a.states = {"n", "d"};
    a.deterministic = {0, 1};
    a.delta = {{{0}, {}}, {{1}, {1}}};
    a.eps = {{1}, {}};
    a.accepting = {{1}};
    a.finalize();
    return a;
}

// Single always-accepting state. Every product state is an exact fixpoint
// of the optimistic init: target = (1 - r_f) + r_f * 1 = 1.
LDGBA one_state() {
    LDGBA a;
    a.props = {"p"};
    a.states = {"q0"};
    a.deterministic = {1};
    a.delta = {{{0}, {0}}};
    a.eps = {{}};
    a.accepting = {{0}};
    a.finalize();
    return a;
}

// Accepting set sits on an unreachable state, so no run ever earns reward.
LDGBA unreachable_goal() {
    LDGBA a;
    a.props = {"p"};
    a.states = {"live", "dead"};
    a.deterministic = {1, 1};
    a.delta = {{{0}, {0}}, {{1}, {1}}};
    a.eps = {{}, {}};
    a.accepting = {{1}};
    a.finalize();
    return a;
}

// One state labeled u forever. The only reward in the product with the
// persistence task is the single commit visit reachable by epsilon.
PLMDP always_u_model() {
    PLMDP m;
    m.states = {"m0"};
    m.actions = {"stay"};
    m.atomic_props = {"u"};
    m.choices.resize(1);
    m.choices[0] = {{0, {{0, 1.0}}}};
    m.labels = {{{1, 1.0}}};
    m.initial_state = 0;
    m.initial_label = 1;
    return m;
}

}  // namespace

TEST_CASE("greedy learning reaches the discounted fixpoint on the hub") {
    auto m = hub3_model();
    auto a = phi_e();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));
    auto p = enumerate_product(env);
    auto vi = discounted_value_iteration(p, rc(0.9, 0.99));

    long i0 = p.find(env.initial());
    REQUIRE(i0 >= 0);
    CHECK(vi.value[i0] > 0.5);  // guards against an all-zero vacuous match

    // Pure exploration visits every pair uniformly; the step-size floor
    // turns the updates into damped value iteration, which contracts
    // geometrically. Without the floor the 1/count averages keep the early
    // near-zero targets alive and the gap stalls around 0.5.
    LearnConfig cfg;
    cfg.episodes = 5000;
    cfg.tau = 30;
    cfg.seed = 3;
    cfg.eps_floor_enabled = true;
    cfg.eps_floor = 1.0;
    cfg.eps_floor_after = 0;
    cfg.alpha_floor = 0.05;
    cfg.window = 0;
    auto tr = train(env, cfg);

    double worst = 0.0;
    for (std::size_t i = 0; i < p.states.size(); ++i)
        worst = std::max(worst, std::abs(tr.table.value(p.states[i]) - vi.value[i]));
    CHECK(worst < 1e-6);
}

TEST_CASE("episode with epsilon zero follows the primed greedy action") {
    auto m = hub3_model();
    auto a = phi_e();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));
    auto x0 = env.initial();

    QTable table(0.0);
    table.row(env, x0).q[1] = 0.5;

    LearnConfig cfg;
    cfg.tau = 1;
    Rng rng(4);
    auto stats = run_episode(env, table, cfg, 0.0, rng);
    CHECK(stats.steps == 1);
    CHECK(table.row(env, x0).count[0] == 0);
    CHECK(table.row(env, x0).count[1] == 1);
}

TEST_CASE("episode with epsilon one tries every action at the start state") {
    auto m = hub3_model();
    auto a = phi_e();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));
    auto x0 = env.initial();

    QTable table(0.0);
    LearnConfig cfg;
    cfg.tau = 1;
    Rng rng(4);
    for (int i = 0; i < 200; ++i) run_episode(env, table, cfg, 1.0, rng);

    auto& row = table.row(env, x0);
    CHECK(row.count[0] > 0);
    CHECK(row.count[1] > 0);
    CHECK(row.count[0] + row.count[1] == 200);
}

TEST_CASE("episodes stop at the step cap or in the sink") {
    LearnConfig cfg;
    cfg.tau = 5;

    SUBCASE("no sink: every episode runs exactly tau steps") {
        auto m = hub3_model();
        auto a = phi_e();
        ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));
        QTable table(0.0);
        Rng rng(7);
        for (int i = 0; i < 20; ++i) CHECK(run_episode(env, table, cfg, 1.0, rng).steps == 5);
    }

    SUBCASE("transition hole: model moves sink immediately, epsilon survives") {
        auto m = labeled_start_model();
        auto a = holed_automaton();
        ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));
        QTable table(0.0);
        Rng rng(7);
        int shortest = cfg.tau + 1, longest = 0;
        for (int i = 0; i < 100; ++i) {
            int s = run_episode(env, table, cfg, 1.0, rng).steps;
            shortest = std::min(shortest, s);
            longest = std::max(longest, s);
        }
        // Both model actions fall off the table on {p}; only the epsilon
        // move into the safe self-loop reaches the cap.
        CHECK(shortest == 1);
        CHECK(longest == 5);
    }
}

TEST_CASE("ties break toward the lowest action index") {
    auto m = hub3_model();
    auto a = phi_e();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));
    auto x0 = env.initial();

    QTable table(0.0);
    SUBCASE("greedy_action on an unseen state") { CHECK(table.greedy_action(x0) == 0); }

    SUBCASE("exact tie") {
        auto& row = table.row(env, x0);
        row.q = {0.5, 0.5};
        CHECK(table.greedy_action(x0) == 0);

        auto pol = extract_policy(env, table);
        CHECK(pol.at(x0) == env.available_actions(x0)[0]);
    }

    SUBCASE("strictly better second action") {
        auto& row = table.row(env, x0);
        row.q = {0.4, 0.5};
        CHECK(table.greedy_action(x0) == 1);
        auto pol = extract_policy(env, table);
        CHECK(pol.at(x0) == env.available_actions(x0)[1]);
    }
}

TEST_CASE("training is reproducible per seed and varies across seeds") {
    auto m = hub3_model();
    auto a = phi_e();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));

    LearnConfig cfg;
    cfg.episodes = 200;
    cfg.tau = 20;
    cfg.seed = 11;
    cfg.eps_floor = 0.5;
    cfg.eps_floor_after = 0;
    cfg.window = 0;

    auto first = train(env, cfg);
    auto second = train(env, cfg);
    REQUIRE(first.curve.size() == second.curve.size());
    for (std::size_t i = 0; i < first.curve.size(); ++i) {
        CHECK(first.curve[i].episode == second.curve[i].episode);
        CHECK(first.curve[i].cumulative_reward == second.curve[i].cumulative_reward);
        CHECK(first.curve[i].steps == second.curve[i].steps);
        CHECK(first.curve[i].value_at_initial == second.curve[i].value_at_initial);
    }
    auto va = extract_values(first.table);
    auto vb = extract_values(second.table);
    REQUIRE(va.size() == vb.size());
    for (const auto& [x, v] : va) CHECK(vb.at(x) == v);

    cfg.seed = 12;
    auto third = train(env, cfg);
    bool any_diff = false;
    for (std::size_t i = 0; i < first.curve.size(); ++i)
        any_diff = any_diff || first.curve[i].cumulative_reward != third.curve[i].cumulative_reward;
    CHECK(any_diff);
}

TEST_CASE("unreachable acceptance keeps every value at zero and converges") {
    auto m = labeled_start_model();
    auto a = unreachable_goal();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));

    LearnConfig cfg;
    cfg.episodes = 50;
    cfg.tau = 20;
    cfg.seed = 2;
    cfg.eps_floor = 0.5;
    cfg.eps_floor_after = 0;
    cfg.window = 10;
    cfg.window_tol = 1e-4;
    cfg.q_init = 0.0;

    auto tr = train(env, cfg);
    CHECK(tr.converged);
    CHECK(tr.episodes_run == 10);  // all targets are zero, so the window fills and stops
    for (const auto& [x, v] : extract_values(tr.table)) CHECK(v == 0.0);
}

TEST_CASE("a single transient accepting visit is worth gamma_f times its payout") {
    auto m = always_u_model();
    auto a = phi_case1();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));

    // Best play: epsilon into the commit state (discount 0.99, reward 0),
    // then one paid step out of it (reward 0.1) before the trap absorbs
    // everything. Value at the start is 0.99 * 0.1.
    LearnConfig cfg;
    cfg.episodes = 2000;
    cfg.tau = 10;
    cfg.seed = 5;
    cfg.eps_floor = 1.0;
    cfg.eps_floor_after = 0;
    cfg.alpha_floor = 0.05;
    cfg.window = 0;
    auto tr = train(env, cfg);
    CHECK(tr.table.value(env.initial()) == doctest::Approx(0.099).epsilon(1e-6));
}

TEST_CASE("optimistic init is an exact fixpoint on an always-accepting loop") {
    auto m = labeled_start_model();
    auto a = one_state();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));

    LearnConfig cfg;
    cfg.episodes = 100;
    cfg.tau = 10;
    cfg.seed = 9;
    cfg.eps_floor = 0.5;
    cfg.eps_floor_after = 0;
    cfg.q_init = 1.0;
    cfg.window = 0;

    auto tr = train(env, cfg);
    CHECK(tr.episodes_run == 100);
    CHECK_FALSE(tr.converged);  // window 0 never stops early
    CHECK(tr.table.value(env.initial()) == 1.0);
    for (const auto& [x, v] : extract_values(tr.table)) CHECK(v == 1.0);
}

TEST_CASE("optimistic init reads through for unseen states and is wiped on first visit") {
    auto m = hub3_model();
    auto a = phi_e();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));
    auto x0 = env.initial();

    QTable table(1.0);
    CHECK(table.value(x0) == 1.0);
    CHECK(table.greedy_action(x0) == 0);

    // First update has step size 1: the entry becomes the bootstrapped
    // target outright, 0 + 0.99 * init(next).
    LearnConfig cfg;
    cfg.tau = 1;
    cfg.q_init = 1.0;
    Rng rng(3);
    run_episode(env, table, cfg, 0.0, rng);
    auto& row = table.row(env, x0);
    CHECK(row.q[0] == 0.99);
    CHECK(row.q[1] == 1.0);
    CHECK(row.count[0] == 1);
    CHECK(row.count[1] == 0);
}

TEST_CASE("window controls early stopping") {
    auto m = hub3_model();
    auto a = phi_e();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));

    LearnConfig cfg;
    cfg.episodes = 60;
    cfg.tau = 10;
    cfg.seed = 6;
    cfg.eps_floor = 0.5;
    cfg.eps_floor_after = 0;

    SUBCASE("a huge tolerance stops as soon as the window fills") {
        cfg.window = 5;
        cfg.window_tol = 1e9;
        auto tr = train(env, cfg);
        CHECK(tr.converged);
        CHECK(tr.episodes_run == 5);
        CHECK(tr.curve.size() == 5);
    }

    SUBCASE("window zero disables stopping") {
        cfg.window = 0;
        auto tr = train(env, cfg);
        CHECK_FALSE(tr.converged);
        CHECK(tr.episodes_run == 60);
    }

    SUBCASE("tolerance zero can never be met") {
        cfg.window = 5;
        cfg.window_tol = 0.0;
        auto tr = train(env, cfg);
        CHECK_FALSE(tr.converged);
        CHECK(tr.episodes_run == 60);
    }
}

TEST_CASE("curve bookkeeping matches the run") {
    auto m = hub3_model();
    auto a = phi_e();
    ProductEnv env(m, a, FrontierMode::tracking, ResetMode::immediate, rc(0.9, 0.99));

    LearnConfig cfg;
    cfg.episodes = 120;
    cfg.tau = 15;
    cfg.seed = 8;
    cfg.eps_floor = 0.5;
    cfg.eps_floor_after = 0;
    cfg.window = 0;

    auto tr = train(env, cfg);
    REQUIRE(tr.curve.size() == static_cast<std::size_t>(tr.episodes_run));
    for (std::size_t i = 0; i < tr.curve.size(); ++i) {
        CHECK(tr.curve[i].episode == static_cast<long>(i) + 1);
        CHECK(tr.curve[i].steps == 15);  // no sink reachable here
        CHECK(tr.curve[i].cumulative_reward >= 0.0);
        // each step pays either 0 or 1 - r_f
        CHECK(tr.curve[i].cumulative_reward <= 15 * 0.1 + 1e-12);
    }
    CHECK(tr.curve.back().value_at_initial == tr.table.value(env.initial()));

    auto values = extract_values(tr.table);
    CHECK(values.size() == tr.table.rows().size());
    for (const auto& [x, v] : values) CHECK(v == tr.table.value(x));

    auto pol = extract_policy(env, tr.table);
    CHECK(pol.size() == tr.table.rows().size());
    for (const auto& [x, u] : pol) {
        auto avail = env.available_actions(x);
        CHECK(std::find(avail.begin(), avail.end(), u) != avail.end());
    }
}
