#include "ltlsyn/product.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace ltlsyn {

ProductEnv::ProductEnv(const PLMDP& m, const LDGBA& a, FrontierMode fmode, ResetMode rmode,
                       RewardConfig rcfg)
    : m_(&m), a_(&a), fmode_(fmode), rmode_(rmode), rcfg_(rcfg) {
    prop_map_.resize(m.atomic_props.size());
    for (std::size_t i = 0; i < m.atomic_props.size(); ++i)
        prop_map_[i] = a.prop_id(m.atomic_props[i]);
}

PropSet ProductEnv::project_label(PropSet model_label) const {
    PropSet out = 0;
    for (std::size_t i = 0; i < prop_map_.size(); ++i)
        if ((model_label & (PropSet{1} << i)) && prop_map_[i] >= 0)
            out |= PropSet{1} << prop_map_[i];
    return out;
}

ProductState ProductEnv::initial() const {
    return {m_->initial_state, m_->initial_label, a_->initial, a_->full_frontier(), false};
}

std::vector<ProductAction> ProductEnv::available_actions(const ProductState& x) const {
    std::vector<ProductAction> out;
    if (x.sink) {
        out.push_back({false, -1});  // absorbing stay
        return out;
    }
    for (const auto& c : m_->choices[x.s]) out.push_back({false, c.action});
    if (!a_->deterministic[x.q])
        for (int q2 : a_->eps[x.q]) out.push_back({true, q2});
    return out;
}

std::uint32_t ProductEnv::accept_flags(const ProductState& x) const {
    if (x.sink) return 0;
    // An emptied frontier (deferred reset) scores as freshly reset.
    return a_->accept_mask[x.q] & scoring_frontier(x.pending, a_->num_sets());
}

FrontierSet ProductEnv::credited_pending(const ProductState& x) const {
    if (fmode_ == FrontierMode::frozen) return x.pending;
    return frontier_update(x.pending, a_->accept_mask[x.q], a_->num_sets(), rmode_);
}

int ProductEnv::automaton_successor(int q, PropSet model_label) const {
    const auto& succs = a_->delta[q][project_label(model_label)];
    if (succs.empty()) return -1;
    return succs.front();
}

ProductStep ProductEnv::step(const ProductState& x, const ProductAction& u, Rng& rng) const {
    ProductStep out;
    out.flags = accept_flags(x);
    out.reward = reward_of(out.flags, rcfg_);
    out.discount = discount_of(out.flags, rcfg_);

    if (x.sink) {
        out.next = x;
        return out;
    }

    FrontierSet credited = credited_pending(x);
    if (u.is_eps) {
        if (a_->deterministic[x.q] ||
            std::find(a_->eps[x.q].begin(), a_->eps[x.q].end(), u.index) == a_->eps[x.q].end())
            throw std::invalid_argument("step: epsilon jump not available here");
        out.next = {x.s, x.label, u.index, credited, false};
        return out;
    }

    PLMDPStep drawn = sample_step(*m_, x.s, u.index, rng);
    int q2 = automaton_successor(x.q, drawn.label);
    if (q2 < 0) {
        out.next = {0, 0, 0, 0, true};
        out.hit_sink = true;
        return out;
    }
    out.next = {drawn.state, drawn.label, q2, credited, false};
    return out;
}

std::string ProductEnv::state_key(const ProductState& x) const {
    if (x.sink) return "!sink";
    std::string out = m_->states[x.s];
    out += '|';
    bool first = true;
    for (std::size_t i = 0; i < m_->atomic_props.size(); ++i)
        if (x.label & (PropSet{1} << i)) {
            if (!first) out += ',';
            out += m_->atomic_props[i];
            first = false;
        }
    out += '|';
    out += a_->states[x.q];
    out += '|';
    first = true;
    for (int j = 1; j <= a_->num_sets(); ++j)
        if (x.pending & (FrontierSet{1} << (j - 1))) {
            if (!first) out += ',';
            out += std::to_string(j);
            first = false;
        }
    return out;
}

ExplicitProduct enumerate_product(const ProductEnv& env, std::size_t cap) {
    const PLMDP& m = env.model();
    ExplicitProduct p;
    p.num_sets = env.automaton().num_sets();

    std::deque<int> queue;
    auto intern = [&](const ProductState& x) {
        auto it = p.index.find(x);
        if (it != p.index.end()) return it->second;
        if (p.states.size() >= cap)
            throw std::runtime_error(
                "enumerate_product: state budget " + std::to_string(cap) +
                " exceeded with " + std::to_string(queue.size()) + " states on the frontier");
        int id = static_cast<int>(p.states.size());
        p.states.push_back(x);
        p.index.emplace(x, id);
        queue.push_back(id);
        return id;
    };

    p.initial = intern(env.initial());
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        ProductState x = p.states[v];  // copy: vectors below may reallocate
        auto acts = env.available_actions(x);
        std::vector<std::vector<std::pair<int, double>>> rows;
        for (const auto& u : acts) {
            std::vector<std::pair<int, double>> row;
            if (x.sink) {
                row.emplace_back(v, 1.0);
            } else if (u.is_eps) {
                ProductState y{x.s, x.label, u.index, env.credited_pending(x), false};
                row.emplace_back(intern(y), 1.0);
            } else {
                FrontierSet credited = env.credited_pending(x);
                std::map<int, double> acc;  // deterministic successor order
                const PLMDP::Choice* c = m.find_choice(x.s, u.index);
                for (const auto& [s2, ps] : c->succ) {
                    for (const auto& [label2, pl] : m.labels[s2]) {
                        if (ps * pl == 0.0) continue;
                        int q2 = env.automaton_successor(x.q, label2);
                        ProductState y = q2 < 0 ? ProductState{0, 0, 0, 0, true}
                                                : ProductState{s2, label2, q2, credited, false};
                        acc[intern(y)] += ps * pl;
                    }
                }
                row.assign(acc.begin(), acc.end());
            }
            rows.push_back(std::move(row));
        }
        p.actions.resize(p.states.size());
        p.trans.resize(p.states.size());
        p.actions[v] = std::move(acts);
        p.trans[v] = std::move(rows);
    }
    p.actions.resize(p.states.size());
    p.trans.resize(p.states.size());

    p.accept.resize(p.states.size());
    for (std::size_t i = 0; i < p.states.size(); ++i)
        p.accept[i] = env.accept_flags(p.states[i]);
    return p;
}

}  // namespace ltlsyn
