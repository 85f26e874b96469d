#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltlsyn/automaton.hpp"
#include "ltlsyn/embedding.hpp"
#include "ltlsyn/plmdp.hpp"
#include "ltlsyn/reward.hpp"
#include "ltlsyn/types.hpp"

namespace ltlsyn {

/**
 * State of the product process: model state, its drawn label, automaton
 * state, and the pending accepting sets of the current round. The pending
 * set is stored as of arrival, before this visit is credited, so a state's
 * own accepting status is read off directly; the credit is applied when the
 * state is left. A run that falls off the automaton (undefined transition)
 * moves to the absorbing sink, marked by sink = true.
 */
struct ProductState {
    int s = 0;
    PropSet label = 0;
    int q = 0;
    FrontierSet pending = 0;
    bool sink = false;

    bool operator==(const ProductState& o) const {
        return sink == o.sink &&
               (sink || (s == o.s && label == o.label && q == o.q && pending == o.pending));
    }
};

struct ProductStateHash {
    std::size_t operator()(const ProductState& x) const {
        if (x.sink) return 0x9e3779b97f4a7c15ull;
        std::uint64_t h = static_cast<std::uint64_t>(x.s);
        h = h * 0x100000001b3ull ^ x.label;
        h = h * 0x100000001b3ull ^ static_cast<std::uint64_t>(x.q);
        h = h * 0x100000001b3ull ^ x.pending;
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
        return static_cast<std::size_t>(h);
    }
};

/**
 * Product action: either a model action (by id) or an epsilon jump of the
 * automaton (by target state id). Epsilon jumps leave the model state and
 * label in place and are available exactly at nondeterministic automaton
 * states with epsilon successors.
 */
struct ProductAction {
    bool is_eps = false;
    int index = -1;  // model action id, or automaton target state id

    bool operator==(const ProductAction& o) const {
        return is_eps == o.is_eps && index == o.index;
    }
};

/** Whether the pending set evolves or stays frozen at the full set. The
 * frozen mode is the conventional product, used as a baseline. */
enum class FrontierMode { tracking, frozen };

struct ProductStep {
    ProductState next;
    double reward = 0.0;    // reward of the source state
    double discount = 0.0;  // discount of the source state
    std::uint32_t flags = 0;  // accepting sets of the source state
    bool hit_sink = false;    // the step fell off the automaton
};

/**
 * Sampling view of the product of a PLMDP and an LDGBA. On a model action
 * the successor state and its label are drawn, and the automaton consumes
 * the label of the state being entered; the initial label is not consumed.
 * Reward, discount, and flags describe the state being left.
 */
class ProductEnv {
  public:
    ProductEnv(const PLMDP& m, const LDGBA& a, FrontierMode fmode = FrontierMode::tracking,
               ResetMode rmode = ResetMode::immediate, RewardConfig rcfg = {});

    const PLMDP& model() const { return *m_; }
    const LDGBA& automaton() const { return *a_; }
    FrontierMode frontier_mode() const { return fmode_; }
    ResetMode reset_mode() const { return rmode_; }
    const RewardConfig& reward_config() const { return rcfg_; }

    ProductState initial() const;

    /** Model actions in id order, then epsilon jumps in target id order. */
    std::vector<ProductAction> available_actions(const ProductState& x) const;

    /** Pending-aware accepting sets of x as a bitmask. */
    std::uint32_t accept_flags(const ProductState& x) const;

    ProductStep step(const ProductState& x, const ProductAction& u, Rng& rng) const;

    /** Model label projected onto the automaton's propositions. */
    PropSet project_label(PropSet model_label) const;

    /** Frontier of the successor of x (identical for all successors). */
    FrontierSet credited_pending(const ProductState& x) const;

    /** Unique automaton successor on a letter, or -1 when undefined. */
    int automaton_successor(int q, PropSet model_label) const;

    std::string state_key(const ProductState& x) const;

  private:
    const PLMDP* m_;
    const LDGBA* a_;
    FrontierMode fmode_;
    ResetMode rmode_;
    RewardConfig rcfg_;
    std::vector<int> prop_map_;  // model prop -> automaton prop or -1
};

/**
 * Explicit finite product: breadth-first closure from the initial state
 * with model actions before epsilon jumps. State 0 is the initial state.
 * accept[i] holds the pending-aware accepting mask of state i.
 */
struct ExplicitProduct {
    std::vector<ProductState> states;
    std::vector<std::vector<ProductAction>> actions;  // per state
    // trans[i][k]: successor distribution of action k at state i.
    std::vector<std::vector<std::vector<std::pair<int, double>>>> trans;
    std::vector<std::uint32_t> accept;
    int num_sets = 0;
    int initial = 0;
    std::unordered_map<ProductState, int, ProductStateHash> index;

    int find(const ProductState& x) const {
        auto it = index.find(x);
        return it == index.end() ? -1 : it->second;
    }
};

/**
 * Enumerates the reachable product. Throws std::runtime_error naming the
 * frontier size when the state budget is exceeded.
 */
ExplicitProduct enumerate_product(const ProductEnv& env, std::size_t cap = 2'000'000);

}  // namespace ltlsyn
