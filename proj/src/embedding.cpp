#include "ltlsyn/embedding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

namespace ltlsyn {

FrontierSet frontier_update(FrontierSet pending, std::uint32_t hit_mask, int num_sets,
                            ResetMode mode) {
    const FrontierSet full = (FrontierSet{1} << num_sets) - 1;
    hit_mask &= full;
    if (pending & hit_mask) {
        FrontierSet next = pending & ~hit_mask;
        if (next == 0 && mode == ResetMode::immediate) {
            // The completing visit is scored against the old pending set, so
            // the new round pre-credits exactly those sets. Discharging the
            // state's whole membership here would let sets it was never
            // scored for slip through a round unflagged.
            next = full & ~pending;
            if (next == 0) next = full;
        }
        return next;
    }
    if (pending == 0 && hit_mask != 0) {
        // Deferred round start: the emptied frontier resets on the next
        // accepting visit, which is scored against the full set, so its
        // whole membership counts as credited.
        FrontierSet next = full & ~hit_mask;
        return next == 0 ? full : next;
    }
    return pending;
}

FrontierSet frontier_update(const LDGBA& a, int q, FrontierSet pending, ResetMode mode) {
    return frontier_update(pending, a.accept_mask[q], a.num_sets(), mode);
}

FrontierSet scoring_frontier(FrontierSet pending, int num_sets) {
    return pending ? pending : (FrontierSet{1} << num_sets) - 1;
}

bool is_accepting_embedded(const LDGBA& a, const EmbeddedState& x, int j) {
    if (j < 1 || j > a.num_sets())
        throw std::out_of_range("is_accepting_embedded: accepting-set index " +
                                std::to_string(j));
    const std::uint32_t bit = std::uint32_t{1} << (j - 1);
    return (a.accept_mask[x.q] & bit) && (scoring_frontier(x.pending, a.num_sets()) & bit);
}

std::vector<EmbeddedStep> eldgba_step(const LDGBA& a, const EmbeddedState& x,
                                      std::optional<PropSet> letter, ResetMode mode) {
    const std::vector<int>* succs;
    if (letter.has_value()) {
        if (*letter >= static_cast<PropSet>(a.num_letters()))
            throw std::out_of_range("eldgba_step: letter out of range");
        succs = &a.delta[x.q][*letter];
    } else {
        succs = &a.eps[x.q];
    }
    std::vector<EmbeddedStep> out;
    out.reserve(succs->size());
    for (int q2 : *succs) {
        EmbeddedStep step;
        step.flags = a.accept_mask[q2] & scoring_frontier(x.pending, a.num_sets());
        step.to = {q2, frontier_update(x.pending, a.accept_mask[q2], a.num_sets(), mode)};
        out.push_back(step);
    }
    return out;
}

EmbeddedRun generate_run(const LDGBA& a, const std::vector<PropSet>& word, int length,
                         ResetMode mode) {
    EmbeddedRun run;
    if (length > static_cast<int>(word.size()))
        throw std::invalid_argument("generate_run: length exceeds the word");
    FrontierSet pending = a.full_frontier();
    int q = a.initial;
    run.states.push_back({q, pending});
    for (int i = 0; i < length; ++i) {
        PropSet letter = word[i];
        const auto& succs = a.delta[q][letter];
        if (succs.empty()) {
            run.complete = false;
            run.diagnostic = "no transition from " + a.states[q] + " on " +
                             a.letter_string(letter) + " at step " + std::to_string(i);
            return run;
        }
        int q2 = succs.front();
        // The run stores the frontier as of arriving, before the visit is
        // credited; crediting happens when the next letter is consumed.
        run.flags.push_back(a.accept_mask[q2] & scoring_frontier(pending, a.num_sets()));
        run.states.push_back({q2, pending});
        pending = frontier_update(pending, a.accept_mask[q2], a.num_sets(), mode);
        q = q2;
    }
    return run;
}

bool embedded_lasso_accepted(const LDGBA& a, const Lasso& w, ResetMode mode) {
    if (w.cycle.empty())
        throw std::invalid_argument("embedded_lasso_accepted: empty cycle");
    const int np = static_cast<int>(w.prefix.size());
    const int nc = static_cast<int>(w.cycle.size());
    const int positions = np + nc;
    const int f = a.num_sets();
    const std::uint32_t full = (std::uint32_t{1} << f) - 1;

    auto letter_at = [&](int pos) { return pos < np ? w.prefix[pos] : w.cycle[pos - np]; };
    auto next_pos = [&](int pos) { return pos + 1 < positions ? pos + 1 : np; };

    // Nodes are (q, pending, position) with pending as of arrival; edges
    // credit the source before moving, matching the run bookkeeping.
    using Node = std::tuple<int, FrontierSet, int>;
    std::map<Node, int> ids;
    std::vector<Node> order;
    std::deque<int> queue;
    auto intern = [&](int q, FrontierSet pending, int pos) {
        auto [it, fresh] =
            ids.try_emplace(Node{q, pending, pos}, static_cast<int>(order.size()));
        if (fresh) {
            order.emplace_back(q, pending, pos);
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(a.initial, a.full_frontier(), 0);
    std::vector<std::pair<int, int>> edges;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        auto [q, pending, pos] = order[v];
        FrontierSet credited = frontier_update(pending, a.accept_mask[q], f, mode);
        PropSet letter = letter_at(pos);
        for (int q2 : a.delta[q][letter])
            edges.emplace_back(v, intern(q2, credited, next_pos(pos)));
        for (int q2 : a.eps[q]) edges.emplace_back(v, intern(q2, credited, pos));
    }
    std::vector<std::vector<int>> adj(order.size());
    for (auto [from, to] : edges) adj[from].push_back(to);

    const int n = static_cast<int>(order.size());
    // Tarjan, iterative.
    std::vector<int> comp(n, -1), index(n, -1), low(n, 0), stack;
    std::vector<char> on_stack(n, 0);
    int next_index = 0, comp_count = 0;
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
                int w2 = adj[v][pos++];
                if (index[w2] == -1) {
                    index[w2] = low[w2] = next_index++;
                    stack.push_back(w2);
                    on_stack[w2] = 1;
                    frames.emplace_back(w2, 0);
                } else if (on_stack[w2]) {
                    low[v] = std::min(low[v], index[w2]);
                }
            } else {
                if (low[v] == index[v]) {
                    int c = comp_count++;
                    while (true) {
                        int w2 = stack.back();
                        stack.pop_back();
                        on_stack[w2] = 0;
                        comp[w2] = c;
                        if (w2 == v) break;
                    }
                }
                int done = v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().first] = std::min(low[frames.back().first], low[done]);
            }
        }
    }

    std::vector<char> has_edge(comp_count, 0);
    std::vector<std::uint32_t> covered(comp_count, 0);
    for (int v = 0; v < n; ++v) {
        for (int w2 : adj[v])
            if (comp[v] == comp[w2]) has_edge[comp[v]] = 1;
        auto [q, pending, pos] = order[v];
        covered[comp[v]] |= a.accept_mask[q] & scoring_frontier(pending, f);
    }
    for (int c = 0; c < comp_count; ++c)
        if (has_edge[c] && covered[c] == full) return true;
    return false;
}

}  // namespace ltlsyn
