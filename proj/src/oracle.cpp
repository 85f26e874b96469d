#include "ltlsyn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace ltlsyn {

namespace {

// Iterative Tarjan over a subgraph given by an edge functional.
struct Scc {
    std::vector<int> comp;
    int count = 0;
};

template <typename EdgeFn>
Scc scc_of(int n, EdgeFn edges_of) {
    Scc res;
    res.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<char> on_stack(n, 0);
    int next_index = 0;
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            const auto& adj = edges_of(v);
            if (pos < adj.size()) {
                int w = adj[pos++];
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
                    low[frames.back().first] = std::min(low[frames.back().first], low[done]);
            }
        }
    }
    return res;
}

}  // namespace

MecClass classify_mec(const EndComponent& ec, int num_sets) {
    const std::uint32_t full = (std::uint32_t{1} << num_sets) - 1;
    if (ec.accept_cover == full) return MecClass::accepting;
    if (ec.accept_cover == 0) return MecClass::rejecting;
    return MecClass::neutral;
}

std::string mec_class_name(MecClass c) {
    switch (c) {
        case MecClass::accepting: return "accepting";
        case MecClass::rejecting: return "rejecting";
        default: return "neutral";
    }
}

std::vector<EndComponent> mec_decomposition(const ExplicitProduct& p) {
    const int n = static_cast<int>(p.states.size());
    // allowed[v] = surviving action indices at v; states drop out when empty.
    std::vector<std::vector<int>> allowed(n);
    std::vector<char> alive(n, 1);
    for (int v = 0; v < n; ++v)
        for (int k = 0; k < static_cast<int>(p.actions[v].size()); ++k)
            allowed[v].push_back(k);

    bool changed = true;
    std::vector<std::vector<int>> adj(n);
    while (changed) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            adj[v].clear();
            if (!alive[v]) continue;
            for (int k : allowed[v])
                for (const auto& [to, prob] : p.trans[v][k])
                    if (prob > 0.0) adj[v].push_back(to);
        }
        Scc scc = scc_of(n, [&](int v) -> const std::vector<int>& { return adj[v]; });

        for (int v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            auto keep_end = std::remove_if(allowed[v].begin(), allowed[v].end(), [&](int k) {
                for (const auto& [to, prob] : p.trans[v][k])
                    if (prob > 0.0 && (!alive[to] || scc.comp[to] != scc.comp[v])) return true;
                return false;
            });
            if (keep_end != allowed[v].end()) {
                allowed[v].erase(keep_end, allowed[v].end());
                changed = true;
            }
            if (allowed[v].empty() && alive[v]) {
                alive[v] = 0;
                changed = true;
            }
        }
    }

    // Surviving components with at least one action form the MECs.
    for (int v = 0; v < n; ++v) {
        adj[v].clear();
        if (!alive[v]) continue;
        for (int k : allowed[v])
            for (const auto& [to, prob] : p.trans[v][k])
                if (prob > 0.0) adj[v].push_back(to);
    }
    Scc scc = scc_of(n, [&](int v) -> const std::vector<int>& { return adj[v]; });
    std::vector<std::vector<int>> members(scc.count);
    for (int v = 0; v < n; ++v)
        if (alive[v]) members[scc.comp[v]].push_back(v);

    std::vector<EndComponent> out;
    for (auto& group : members) {
        if (group.empty()) continue;
        // A single state must keep a self-closing action to be an end
        // component; larger groups are strongly connected by construction.
        EndComponent ec;
        std::sort(group.begin(), group.end());
        ec.states = group;
        bool ok = true;
        for (int v : group) {
            if (allowed[v].empty()) ok = false;
            ec.action_sets.push_back(allowed[v]);
            ec.accept_cover |= p.accept[v];
        }
        if (group.size() == 1) {
            int v = group[0];
            bool self = false;
            for (int k : allowed[v])
                for (const auto& [to, prob] : p.trans[v][k])
                    if (prob > 0.0 && to == v) self = true;
            if (!self) ok = false;
        }
        if (ok) out.push_back(std::move(ec));
    }
    std::sort(out.begin(), out.end(), [](const EndComponent& a, const EndComponent& b) {
        return a.states.front() < b.states.front();
    });
    return out;
}

std::vector<EndComponent> amec_set(const ExplicitProduct& p,
                                   const std::vector<EndComponent>& mecs) {
    std::vector<EndComponent> out;
    for (const auto& ec : mecs)
        if (classify_mec(ec, p.num_sets) == MecClass::accepting) out.push_back(ec);
    return out;
}

ReachabilityResult max_reach_probability(const ExplicitProduct& p,
                                         const std::vector<char>& target, double tol,
                                         int max_sweeps) {
    const int n = static_cast<int>(p.states.size());
    if (static_cast<int>(target.size()) != n)
        throw std::invalid_argument("max_reach_probability: target size mismatch");

    // States with no path into the target keep probability zero.
    std::vector<std::vector<int>> pred(n);
    for (int v = 0; v < n; ++v)
        for (const auto& row : p.trans[v])
            for (const auto& [to, prob] : row)
                if (prob > 0.0) pred[to].push_back(v);
    std::vector<char> can_reach(n, 0);
    std::deque<int> queue;
    for (int v = 0; v < n; ++v)
        if (target[v]) {
            can_reach[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : pred[v])
            if (!can_reach[u]) {
                can_reach[u] = 1;
                queue.push_back(u);
            }
    }

    ReachabilityResult res;
    res.value.assign(n, 0.0);
    res.greedy_action.assign(n, 0);
    for (int v = 0; v < n; ++v)
        if (target[v]) res.value[v] = 1.0;

    for (res.sweeps = 0; res.sweeps < max_sweeps; ++res.sweeps) {
        double delta = 0.0;
        for (int v = 0; v < n; ++v) {
            if (target[v] || !can_reach[v]) continue;
            double best = 0.0;
            int best_k = 0;
            for (int k = 0; k < static_cast<int>(p.trans[v].size()); ++k) {
                double sum = 0.0;
                for (const auto& [to, prob] : p.trans[v][k]) sum += prob * res.value[to];
                if (sum > best + 1e-15) {
                    best = sum;
                    best_k = k;
                }
            }
            delta = std::max(delta, std::abs(best - res.value[v]));
            res.value[v] = best;
            res.greedy_action[v] = best_k;
        }
        if (delta < tol) break;
    }
    return res;
}

ReachabilityResult max_satisfaction_probability(const ExplicitProduct& p,
                                                const std::vector<EndComponent>& mecs,
                                                double tol) {
    std::vector<char> target(p.states.size(), 0);
    for (const auto& ec : mecs)
        if (classify_mec(ec, p.num_sets) == MecClass::accepting)
            for (int v : ec.states) target[v] = 1;
    return max_reach_probability(p, target, tol);
}

namespace {

void require_policy(const ExplicitProduct& p, const IndexPolicy& pol) {
    if (pol.size() != p.states.size())
        throw std::invalid_argument("policy size does not match the product");
    for (std::size_t v = 0; v < pol.size(); ++v)
        if (pol[v] < 0 || pol[v] >= static_cast<int>(p.actions[v].size()))
            throw std::invalid_argument("policy has no valid action at state " +
                                        std::to_string(v));
}

}  // namespace

std::vector<RecurrentClass> classify_recurrent_classes(const ExplicitProduct& p,
                                                       const IndexPolicy& pol) {
    require_policy(p, pol);
    const int n = static_cast<int>(p.states.size());
    std::vector<std::vector<int>> adj(n);
    for (int v = 0; v < n; ++v)
        for (const auto& [to, prob] : p.trans[v][pol[v]])
            if (prob > 0.0) adj[v].push_back(to);

    Scc scc = scc_of(n, [&](int v) -> const std::vector<int>& { return adj[v]; });
    std::vector<char> bottom(scc.count, 1);
    for (int v = 0; v < n; ++v)
        for (int w : adj[v])
            if (scc.comp[w] != scc.comp[v]) bottom[scc.comp[v]] = 0;

    std::vector<char> reach(n, 0);
    std::deque<int> queue{p.initial};
    reach[p.initial] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : adj[v])
            if (!reach[w]) {
                reach[w] = 1;
                queue.push_back(w);
            }
    }

    std::vector<RecurrentClass> out;
    std::vector<std::vector<int>> members(scc.count);
    for (int v = 0; v < n; ++v) members[scc.comp[v]].push_back(v);
    for (int c = 0; c < scc.count; ++c) {
        if (!bottom[c]) continue;
        // A bottom component of a chain always has its self-edges.
        RecurrentClass rc;
        rc.states = members[c];
        std::sort(rc.states.begin(), rc.states.end());
        for (int v : rc.states) {
            rc.accept_cover |= p.accept[v];
            if (reach[v]) rc.reachable = true;
        }
        out.push_back(std::move(rc));
    }
    std::sort(out.begin(), out.end(), [](const RecurrentClass& a, const RecurrentClass& b) {
        return a.states.front() < b.states.front();
    });
    return out;
}

double policy_satisfaction_probability(const ExplicitProduct& p, const IndexPolicy& pol,
                                       double tol) {
    require_policy(p, pol);
    const int n = static_cast<int>(p.states.size());
    const std::uint32_t full = (std::uint32_t{1} << p.num_sets) - 1;
    auto classes = classify_recurrent_classes(p, pol);

    std::vector<char> good(n, 0), in_bottom(n, 0);
    for (const auto& rc : classes)
        for (int v : rc.states) {
            in_bottom[v] = 1;
            if (rc.accept_cover == full) good[v] = 1;
        }

    // Reach probability of the good classes in the induced chain; bottom
    // classes are absorbing for this purpose.
    std::vector<double> value(n, 0.0);
    for (int v = 0; v < n; ++v)
        if (good[v]) value[v] = 1.0;
    for (int sweep = 0; sweep < 1'000'000; ++sweep) {
        double delta = 0.0;
        for (int v = 0; v < n; ++v) {
            if (in_bottom[v]) continue;
            double sum = 0.0;
            for (const auto& [to, prob] : p.trans[v][pol[v]]) sum += prob * value[to];
            delta = std::max(delta, std::abs(sum - value[v]));
            value[v] = sum;
        }
        if (delta < tol) break;
    }
    return value[p.initial];
}

BruteForceResult brute_force_deterministic_policies(const ExplicitProduct& p, long budget) {
    const int n = static_cast<int>(p.states.size());
    double log_count = 0.0;
    for (int v = 0; v < n; ++v) log_count += std::log10(double(p.actions[v].size()));
    if (log_count > std::log10(double(budget)))
        throw std::runtime_error("brute_force_deterministic_policies: about 10^" +
                                 std::to_string(log_count) + " policies exceed the budget of " +
                                 std::to_string(budget));

    BruteForceResult res;
    IndexPolicy pol(n, 0);
    while (true) {
        ++res.policies_checked;
        double prob = policy_satisfaction_probability(p, pol);
        if (prob > res.best_probability) {
            res.best_probability = prob;
            res.best_policy = pol;
        }
        if (prob > 0.0) res.any_satisfying = true;

        int v = 0;
        while (v < n) {
            if (++pol[v] < static_cast<int>(p.actions[v].size())) break;
            pol[v] = 0;
            ++v;
        }
        if (v == n) break;
    }
    if (res.best_policy.empty()) res.best_policy = IndexPolicy(n, 0);
    return res;
}

ReachabilityResult discounted_value_iteration(const ExplicitProduct& p, const RewardConfig& cfg,
                                              double tol, int max_sweeps) {
    const int n = static_cast<int>(p.states.size());
    ReachabilityResult res;
    res.value.assign(n, 0.0);
    res.greedy_action.assign(n, 0);
    for (res.sweeps = 0; res.sweeps < max_sweeps; ++res.sweeps) {
        double delta = 0.0;
        for (int v = 0; v < n; ++v) {
            double r = reward_of(p.accept[v], cfg);
            double g = discount_of(p.accept[v], cfg);
            double best = -1.0;
            int best_k = 0;
            for (int k = 0; k < static_cast<int>(p.trans[v].size()); ++k) {
                double sum = 0.0;
                for (const auto& [to, prob] : p.trans[v][k]) sum += prob * res.value[to];
                double q = r + g * sum;
                if (q > best + 1e-15) {
                    best = q;
                    best_k = k;
                }
            }
            if (p.trans[v].empty()) best = r;
            delta = std::max(delta, std::abs(best - res.value[v]));
            res.value[v] = best;
            res.greedy_action[v] = best_k;
        }
        if (delta < tol) break;
    }
    return res;
}

IndexPolicy index_policy(const ExplicitProduct& p, const ProductEnv& env, const Policy& pol) {
    IndexPolicy out(p.states.size(), -1);
    for (std::size_t v = 0; v < p.states.size(); ++v) {
        auto it = pol.find(p.states[v]);
        if (it == pol.end()) continue;
        const auto& acts = p.actions[v];
        for (int k = 0; k < static_cast<int>(acts.size()); ++k)
            if (acts[k] == it->second) {
                out[v] = k;
                break;
            }
    }
    (void)env;
    return out;
}

}  // namespace ltlsyn
