#include "ltlsyn/learning.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ltlsyn {

QTable::Row& QTable::row(const ProductEnv& env, const ProductState& x) {
    auto it = rows_.find(x);
    if (it == rows_.end()) {
        Row fresh;
        std::size_t n = env.available_actions(x).size();
        fresh.q.assign(n, init_);
        fresh.count.assign(n, 0);
        it = rows_.emplace(x, std::move(fresh)).first;
    }
    return it->second;
}

const QTable::Row* QTable::find(const ProductState& x) const {
    auto it = rows_.find(x);
    return it == rows_.end() ? nullptr : &it->second;
}

double QTable::value(const ProductState& x) const {
    const Row* r = find(x);
    if (r == nullptr) return init_;
    if (r->q.empty()) return 0.0;
    return *std::max_element(r->q.begin(), r->q.end());
}

int QTable::greedy_action(const ProductState& x) const {
    const Row* r = find(x);
    if (r == nullptr || r->q.empty()) return 0;
    int best = 0;
    for (int i = 1; i < static_cast<int>(r->q.size()); ++i)
        if (r->q[i] > r->q[best]) best = i;
    return best;
}

double q_update(const ProductEnv& env, QTable& table, const ProductState& x, int action_idx,
                const ProductStep& step, double alpha_floor) {
    double next_value = step.next.sink ? 0.0 : table.value(step.next);
    QTable::Row& r = table.row(env, x);
    long count = ++r.count[action_idx];
    double alpha = std::max(1.0 / static_cast<double>(count), alpha_floor);
    double target = step.reward + step.discount * next_value;
    r.q[action_idx] = (1.0 - alpha) * r.q[action_idx] + alpha * target;
    return r.q[action_idx];
}

EpisodeStats run_episode(const ProductEnv& env, QTable& table, const LearnConfig& cfg,
                         double epsilon, Rng& rng) {
    EpisodeStats stats;
    ProductState x = env.initial();
    for (int t = 0; t < cfg.tau; ++t) {
        if (x.sink) break;
        QTable::Row& r = table.row(env, x);
        int idx;
        if (uniform01(rng) < epsilon) {
            idx = static_cast<int>(uniform_index(rng, r.q.size()));
        } else {
            idx = table.greedy_action(x);
        }
        ProductAction u = env.available_actions(x)[idx];
        ProductStep step = env.step(x, u, rng);

        double before = table.value(x);
        q_update(env, table, x, idx, step, cfg.alpha_floor);
        double after = table.value(x);
        stats.max_value_change = std::max(stats.max_value_change, std::abs(after - before));

        stats.cumulative_reward += step.reward;
        ++stats.steps;
        x = step.next;
    }
    return stats;
}

Policy extract_policy(const ProductEnv& env, const QTable& table) {
    Policy pol;
    for (const auto& [x, r] : table.rows()) {
        int best = 0;
        for (int i = 1; i < static_cast<int>(r.q.size()); ++i)
            if (r.q[i] > r.q[best]) best = i;
        pol[x] = env.available_actions(x)[best];
    }
    return pol;
}

ValueMap extract_values(const QTable& table) {
    ValueMap values;
    for (const auto& [x, r] : table.rows()) {
        double v = r.q.empty() ? 0.0 : *std::max_element(r.q.begin(), r.q.end());
        values[x] = v;
    }
    return values;
}

TrainResult train(const ProductEnv& env, const LearnConfig& cfg) {
    TrainResult out;
    out.table = QTable(cfg.q_init);
    Rng rng(cfg.seed);
    std::deque<double> window;

    for (long ep = 1; ep <= cfg.episodes; ++ep) {
        double epsilon = 1.0 / static_cast<double>(ep);
        if (cfg.eps_floor_enabled && ep > cfg.eps_floor_after)
            epsilon = std::max(epsilon, cfg.eps_floor);

        EpisodeStats stats = run_episode(env, out.table, cfg, epsilon, rng);
        out.curve.push_back({ep, stats.cumulative_reward, stats.steps,
                             out.table.value(env.initial())});
        out.episodes_run = ep;

        if (cfg.window > 0) {
            window.push_back(stats.max_value_change);
            if (static_cast<int>(window.size()) > cfg.window) window.pop_front();
            if (static_cast<int>(window.size()) == cfg.window &&
                *std::max_element(window.begin(), window.end()) < cfg.window_tol) {
                out.converged = true;
                break;
            }
        }
    }
    return out;
}

}  // namespace ltlsyn
