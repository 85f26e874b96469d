#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ltlsyn/product.hpp"
#include "ltlsyn/types.hpp"

namespace ltlsyn {

/**
 * Tabular action values, allocated lazily per visited state. Rows follow
 * the deterministic available_actions order of the environment; unseen
 * entries read as zero.
 */
class QTable {
  public:
    struct Row {
        std::vector<double> q;
        std::vector<long> count;
    };

    explicit QTable(double init = 0.0) : init_(init) {}

    Row& row(const ProductEnv& env, const ProductState& x);
    const Row* find(const ProductState& x) const;

    double value(const ProductState& x) const;  // max over actions, init if unseen
    int greedy_action(const ProductState& x) const;  // lowest index wins ties, 0 if unseen

    const std::unordered_map<ProductState, Row, ProductStateHash>& rows() const {
        return rows_;
    }

  private:
    double init_ = 0.0;
    std::unordered_map<ProductState, Row, ProductStateHash> rows_;
};

/**
 * One tabular update toward the bootstrapped target
 * R(x) + gamma(x) * max_u' Q(x', u') with the visit-count step size
 * 1/Count(x, u) after increment, optionally floored. Returns the new value.
 */
double q_update(const ProductEnv& env, QTable& table, const ProductState& x, int action_idx,
                const ProductStep& step, double alpha_floor);

struct LearnConfig {
    long episodes = 2000;
    int tau = 100;              // steps per episode
    std::uint64_t seed = 1;

    // Exploration: eps = 1/episode, floored after a burn-in.
    bool eps_floor_enabled = true;
    double eps_floor = 0.01;
    long eps_floor_after = 100;

    // Step size: 1/Count, optionally floored (0 keeps the pure schedule).
    double alpha_floor = 0.0;

    // Starting value of every action entry. Setting this to the return
    // ceiling (1) makes greedy play seek out untried actions, which covers
    // states the decaying-exploration schedule would rarely reach.
    double q_init = 0.0;

    // Convergence: stop when the per-episode max value change stays below
    // tol for `window` consecutive episodes. 0 disables early stopping.
    int window = 50;
    double window_tol = 1e-4;
};

struct CurvePoint {
    long episode = 0;
    double cumulative_reward = 0.0;
    int steps = 0;
    double value_at_initial = 0.0;
};

struct EpisodeStats {
    double cumulative_reward = 0.0;
    int steps = 0;
    double max_value_change = 0.0;
};

/**
 * One episode from the initial state: at most cfg.tau steps, epsilon-greedy
 * with the given exploration rate, terminating early in the absorbing sink.
 */
EpisodeStats run_episode(const ProductEnv& env, QTable& table, const LearnConfig& cfg,
                         double epsilon, Rng& rng);

using Policy = std::unordered_map<ProductState, ProductAction, ProductStateHash>;
using ValueMap = std::unordered_map<ProductState, double, ProductStateHash>;

struct TrainResult {
    QTable table;
    std::vector<CurvePoint> curve;
    long episodes_run = 0;
    bool converged = false;
};

/** Greedy policy over all visited states; lowest action index wins ties. */
Policy extract_policy(const ProductEnv& env, const QTable& table);

/** State values max_u Q(x, u) over all visited states. */
ValueMap extract_values(const QTable& table);

TrainResult train(const ProductEnv& env, const LearnConfig& cfg);

}  // namespace ltlsyn
