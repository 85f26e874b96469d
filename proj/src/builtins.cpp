#include "ltlsyn/builtins.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltlsyn {

PLMDP hub3_model() {
    PLMDP m;
    m.states = {"s0", "s1", "s2"};
    m.actions = {"a01", "a02", "a10", "a11", "a20", "a22"};
    m.atomic_props = {"r0", "r1", "r2"};
    m.choices.resize(3);
    auto hop = [&](int from, const std::string& act, int to) {
        PLMDP::Choice c;
        c.action = m.action_id(act);
        c.succ = {{to, 1.0}};
        m.choices[from].push_back(c);
    };
    hop(0, "a01", 1);
    hop(0, "a02", 2);
    hop(1, "a10", 0);
    hop(1, "a11", 1);
    hop(2, "a20", 0);
    hop(2, "a22", 2);
    for (auto& row : m.choices)
        std::sort(row.begin(), row.end(),
                  [](const PLMDP::Choice& a, const PLMDP::Choice& b) { return a.action < b.action; });
    m.labels = {{{PropSet{1} << 0, 1.0}}, {{PropSet{1} << 1, 1.0}}, {{PropSet{1} << 2, 1.0}}};
    m.initial_state = 0;
    m.initial_label = PropSet{1} << 0;
    return m;
}

LDGBA phi_e() {
    LDGBA a;
    a.props = {"r1", "r2"};
    a.states = {"q0", "q1", "q2"};
    a.initial = 0;
    a.deterministic = {1, 1, 1};
    const int n = static_cast<int>(a.states.size());
    a.delta.assign(n, std::vector<std::vector<int>>(a.num_letters()));
    a.eps.assign(n, {});
    // Every state routes by the letter just read: r1 wins over r2, anything
    // else returns to q0.
    for (int q = 0; q < n; ++q)
        for (PropSet l = 0; l < static_cast<PropSet>(a.num_letters()); ++l) {
            int to = 0;
            if (l & 1)
                to = 1;
            else if (l & 2)
                to = 2;
            a.delta[q][l] = {to};
        }
    a.accepting = {{1}, {2}};
    a.finalize();
    return a;
}

LDGBA phi_case1() {
    LDGBA a;
    a.props = {"t", "u"};
    a.states = {"wait", "hold", "trap"};
    a.initial = 0;
    a.deterministic = {0, 1, 1};
    const PropSet t_bit = 1, u_bit = 2;
    a.delta.assign(3, std::vector<std::vector<int>>(a.num_letters()));
    a.eps.assign(3, {});
    for (PropSet l = 0; l < static_cast<PropSet>(a.num_letters()); ++l) {
        a.delta[0][l] = {(l & u_bit) ? 2 : 0};
        a.delta[1][l] = {((l & t_bit) && !(l & u_bit)) ? 1 : 2};
        a.delta[2][l] = {2};
    }
    a.eps[0] = {1};  // commit to "t from now on"
    a.accepting = {{1}};
    a.finalize();
    return a;
}

namespace {

// Shared skeleton for the surveillance tasks: automaton states remember
// which bases the last letter contained (plus an extra payload bit collapsed
// in when with_supply is set), obs letters fall into a trap.
LDGBA surveillance_automaton(bool with_supply) {
    LDGBA a;
    a.props = {"base1", "base2", "base3", "obs"};
    if (with_supply) a.props.push_back("sply");
    const int obligations = with_supply ? 2 : 1;
    const int trap = 8 * obligations;

    for (int o = 0; o < obligations; ++o)
        for (int s = 0; s < 8; ++s) {
            std::string name = "b";
            for (int i = 0; i < 3; ++i)
                if (s & (1 << i)) name += std::to_string(i + 1);
            if (name == "b") name = "none";
            if (with_supply) name += o ? "_due" : "_free";
            a.states.push_back(name);
        }
    a.states.push_back("trap");
    a.initial = 0;
    a.deterministic.assign(a.states.size(), 1);
    a.delta.assign(a.states.size(), std::vector<std::vector<int>>(a.num_letters()));
    a.eps.assign(a.states.size(), {});

    const PropSet obs_bit = 1 << 3, sply_bit = 1 << 4;
    for (int o = 0; o < obligations; ++o)
        for (int s = 0; s < 8; ++s) {
            const int q = o * 8 + s;
            for (PropSet l = 0; l < static_cast<PropSet>(a.num_letters()); ++l) {
                int seen = static_cast<int>(l & 7);
                int to;
                if (l & obs_bit) {
                    to = trap;
                } else if (!with_supply) {
                    to = seen;
                } else if (o == 1 && seen == 0 && (l & sply_bit)) {
                    // a second supply arrived before any base
                    to = trap;
                } else {
                    int next_o = (l & sply_bit) ? 1 : (o == 1 && seen == 0 ? 1 : 0);
                    to = next_o * 8 + seen;
                }
                a.delta[q][l] = {to};
            }
        }
    for (PropSet l = 0; l < static_cast<PropSet>(a.num_letters()); ++l) a.delta[trap][l] = {trap};

    a.accepting.assign(3, {});
    for (int o = 0; o < obligations; ++o)
        for (int s = 0; s < 8; ++s)
            for (int i = 0; i < 3; ++i)
                if (s & (1 << i)) a.accepting[i].push_back(o * 8 + s);
    a.finalize();
    return a;
}

}  // namespace

LDGBA phi_case2() { return surveillance_automaton(false); }

LDGBA phi_case3() { return surveillance_automaton(true); }

GridSpec target_grid_spec() {
    GridSpec g;
    g.width = 4;
    g.height = 3;
    g.slip = 0.1;
    g.initial_cell = {0, 0};
    g.cells = {
        {0, 3, {"t"}, 1.0},
        {2, 3, {"t"}, 1.0},
        {2, 0, {"u"}, 1.0},
        {2, 2, {"u"}, 1.0},
    };
    return g;
}

GridSpec surveillance_grid_spec(int side) {
    if (side < 5) throw std::invalid_argument("surveillance grid needs side >= 5");
    GridSpec g;
    g.width = side;
    g.height = side;
    g.slip = 0.1;
    const int mid = side / 2;
    g.initial_cell = {0, mid};
    g.cells = {
        {0, 0, {"base1"}, 1.0},
        {0, side - 1, {"base2"}, 1.0},
        {side - 1, mid, {"base3"}, 1.0},
        {side - 1, 0, {"sply"}, 1.0},
        {mid, mid, {"obs"}, 0.1},
    };
    return g;
}

PLMDP builtin_model(const std::string& name) {
    if (name == "hub3") return hub3_model();
    GridSpec g;
    if (builtin_grid_spec(name, g)) return build_grid_env(g);
    throw std::invalid_argument("unknown builtin model '" + name + "'");
}

bool builtin_grid_spec(const std::string& name, GridSpec& out) {
    if (name == "grid_case1") {
        out = target_grid_spec();
        return true;
    }
    if (name == "grid_case2") {
        out = surveillance_grid_spec(5);
        return true;
    }
    if (name == "grid_case2_15") {
        out = surveillance_grid_spec(15);
        return true;
    }
    if (name == "grid_case2_25") {
        out = surveillance_grid_spec(25);
        return true;
    }
    if (name == "grid_case2_40") {
        out = surveillance_grid_spec(40);
        return true;
    }
    return false;
}

LDGBA builtin_automaton(const std::string& name) {
    if (name == "phi_e") return phi_e();
    if (name == "phi_case1") return phi_case1();
    if (name == "phi_case2") return phi_case2();
    if (name == "phi_case3") return phi_case3();
    throw std::invalid_argument("unknown builtin automaton '" + name + "'");
}

std::vector<std::string> builtin_model_names() {
    return {"hub3", "grid_case1", "grid_case2", "grid_case2_15", "grid_case2_25", "grid_case2_40"};
}

std::vector<std::string> builtin_automaton_names() {
    return {"phi_e", "phi_case1", "phi_case2", "phi_case3"};
}

}  // namespace ltlsyn
