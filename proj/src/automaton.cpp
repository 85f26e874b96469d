#include "ltlsyn/automaton.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace ltlsyn {

int LDGBA::state_id(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

int LDGBA::prop_id(const std::string& name) const {
    auto it = std::find(props.begin(), props.end(), name);
    return it == props.end() ? -1 : static_cast<int>(it - props.begin());
}

std::string LDGBA::letter_string(PropSet letter) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (letter & (PropSet{1} << i)) {
            if (!first) out += ",";
            out += props[i];
            first = false;
        }
    }
    return out + "}";
}

void LDGBA::finalize() {
    auto dedupe = [](std::vector<int>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    accept_mask.assign(states.size(), 0);
    for (std::size_t j = 0; j < accepting.size(); ++j) {
        dedupe(accepting[j]);
        for (int q : accepting[j]) accept_mask[q] |= std::uint32_t{1} << j;
    }
    for (auto& per_state : delta)
        for (auto& succs : per_state) dedupe(succs);
    for (auto& succs : eps) dedupe(succs);
}

ValidationReport validate_ldgba(const LDGBA& a) {
    ValidationReport rep;
    const int n = static_cast<int>(a.states.size());
    if (n == 0) {
        rep.add("states", "automaton has no states");
        return rep;
    }
    if (a.props.size() > 16) rep.add("props", "more than 16 propositions");
    if (a.initial < 0 || a.initial >= n) rep.add("initial", "initial state out of range");
    if (static_cast<int>(a.deterministic.size()) != n ||
        static_cast<int>(a.delta.size()) != n || static_cast<int>(a.eps.size()) != n) {
        rep.add("automaton", "per-state tables do not match the state count");
        return rep;
    }
    if (a.accepting.empty()) rep.add("accepting", "no accepting sets");

    const int letters = a.num_letters();
    for (int q = 0; q < n; ++q) {
        if (static_cast<int>(a.delta[q].size()) != letters) {
            rep.add("state " + a.states[q], "transition table has wrong letter count");
            continue;
        }
        for (int l = 0; l < letters; ++l) {
            for (int to : a.delta[q][l])
                if (to < 0 || to >= n)
                    rep.add("state " + a.states[q], "successor id out of range");
        }
        if (a.deterministic[q]) {
            for (int l = 0; l < letters; ++l) {
                if (a.delta[q][l].empty())
                    rep.add("state " + a.states[q],
                            "not total: no transition on letter " + a.letter_string(l));
                else if (a.delta[q][l].size() > 1)
                    rep.add("state " + a.states[q],
                            "not deterministic on letter " + a.letter_string(l));
                for (int to : a.delta[q][l])
                    if (to >= 0 && to < n && !a.deterministic[to])
                        rep.add("state " + a.states[q],
                                "deterministic part is not closed: letter " +
                                    a.letter_string(l) + " leaves it");
            }
            if (!a.eps[q].empty())
                rep.add("state " + a.states[q], "epsilon transition out of the deterministic part");
        } else {
            for (int to : a.eps[q]) {
                if (to < 0 || to >= n)
                    rep.add("state " + a.states[q], "epsilon successor id out of range");
                else if (!a.deterministic[to])
                    rep.add("state " + a.states[q], "epsilon successor outside the deterministic part");
            }
        }
    }

    for (std::size_t j = 0; j < a.accepting.size(); ++j) {
        for (int q : a.accepting[j]) {
            if (q < 0 || q >= n)
                rep.add("accepting set " + std::to_string(j + 1), "state id out of range");
            else if (!a.deterministic[q])
                rep.add("accepting set " + std::to_string(j + 1),
                        "state " + a.states[q] + " is outside the deterministic part");
        }
    }
    return rep;
}

namespace {

// Tarjan over an explicit adjacency list. Returns the component id per node
// and marks components that contain at least one edge (self-loops count).
struct SccResult {
    std::vector<int> comp;
    std::vector<char> has_edge;
    int count = 0;
};

SccResult scc_decompose(int n, const std::vector<std::vector<int>>& adj) {
    SccResult res;
    res.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    int next_index = 0;

    // Iterative Tarjan; (node, child position) frames.
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < adj[v].size()) {
                int w = adj[v][pos++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    int c = res.count++;
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        res.comp[w] = c;
                        if (w == v) break;
                    }
                }
                int done = v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().first] =
                        std::min(low[frames.back().first], low[done]);
            }
        }
    }

    res.has_edge.assign(res.count, 0);
    for (int v = 0; v < n; ++v)
        for (int w : adj[v])
            if (res.comp[v] == res.comp[w]) res.has_edge[res.comp[v]] = 1;
    return res;
}

}  // namespace

bool lasso_accepted(const LDGBA& a, const Lasso& w) {
    if (w.cycle.empty()) throw std::invalid_argument("lasso_accepted: empty cycle");
    const int np = static_cast<int>(w.prefix.size());
    const int nc = static_cast<int>(w.cycle.size());
    const int positions = np + nc;
    const int n = static_cast<int>(a.states.size());
    const int total = n * positions;

    auto node = [&](int q, int pos) { return q * positions + pos; };
    auto letter_at = [&](int pos) {
        return pos < np ? w.prefix[pos] : w.cycle[pos - np];
    };
    auto next_pos = [&](int pos) { return pos + 1 < positions ? pos + 1 : np; };

    // Reachable subgraph from (initial, 0).
    std::vector<char> reach(total, 0);
    std::deque<int> queue;
    reach[node(a.initial, 0)] = 1;
    queue.push_back(node(a.initial, 0));
    std::vector<std::vector<int>> adj(total);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        int q = v / positions, pos = v % positions;
        PropSet letter = letter_at(pos);
        auto push = [&](int to) {
            adj[v].push_back(to);
            if (!reach[to]) {
                reach[to] = 1;
                queue.push_back(to);
            }
        };
        for (int q2 : a.delta[q][letter]) push(node(q2, next_pos(pos)));
        for (int q2 : a.eps[q]) push(node(q2, pos));
    }

    SccResult scc = scc_decompose(total, adj);
    const int f = a.num_sets();
    const std::uint32_t full = (std::uint32_t{1} << f) - 1;
    std::vector<std::uint32_t> covered(scc.count, 0);
    for (int v = 0; v < total; ++v) {
        if (!reach[v]) continue;
        int q = v / positions;
        covered[scc.comp[v]] |= a.accept_mask[q];
    }
    for (int c = 0; c < scc.count; ++c)
        if (scc.has_edge[c] && covered[c] == full) return true;
    return false;
}

LDGBA degeneralize(const LDGBA& a) {
    const int f = a.num_sets();
    const int letters = a.num_letters();

    // Counter advance happens when leaving an F_i state at level i.
    auto advance = [&](int q, int level) {
        if (a.accept_mask[q] & (std::uint32_t{1} << (level - 1)))
            return level == f ? 1 : level + 1;
        return level;
    };

    // Reachable (q, level) pairs, breadth first for stable ids.
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> order;
    std::deque<std::pair<int, int>> queue;
    auto intern = [&](int q, int level) {
        auto [it, fresh] = ids.try_emplace({q, level}, static_cast<int>(order.size()));
        if (fresh) {
            order.emplace_back(q, level);
            queue.push_back({q, level});
        }
        return it->second;
    };
    intern(a.initial, 1);
    while (!queue.empty()) {
        auto [q, level] = queue.front();
        queue.pop_front();
        int next_level = advance(q, level);
        for (int l = 0; l < letters; ++l)
            for (int q2 : a.delta[q][l]) intern(q2, next_level);
        for (int q2 : a.eps[q]) intern(q2, level);
    }

    LDGBA out;
    out.props = a.props;
    out.initial = 0;
    const int m = static_cast<int>(order.size());
    out.states.reserve(m);
    for (auto [q, level] : order)
        out.states.push_back(a.states[q] + "@" + std::to_string(level));
    out.deterministic.resize(m);
    out.delta.assign(m, std::vector<std::vector<int>>(letters));
    out.eps.assign(m, {});
    out.accepting.assign(1, {});
    for (int v = 0; v < m; ++v) {
        auto [q, level] = order[v];
        out.deterministic[v] = a.deterministic[q];
        int next_level = advance(q, level);
        for (int l = 0; l < letters; ++l)
            for (int q2 : a.delta[q][l])
                out.delta[v][l].push_back(ids.at({q2, next_level}));
        for (int q2 : a.eps[q]) out.eps[v].push_back(ids.at({q2, level}));
        if (level == 1 && f > 0 && (a.accept_mask[q] & 1u)) out.accepting[0].push_back(v);
    }
    out.finalize();
    return out;
}

}  // namespace ltlsyn
