#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltlsyn/learning.hpp"
#include "ltlsyn/product.hpp"
#include "ltlsyn/reward.hpp"

namespace ltlsyn {

/**
 * Maximal end component of an explicit product: a set of states together
 * with the per-state actions that keep the process inside the set, such
 * that the set is strongly connected under those actions.
 */
struct EndComponent {
    std::vector<int> states;                    // sorted
    std::vector<std::vector<int>> action_sets;  // action indices, parallel to states
    std::uint32_t accept_cover = 0;             // union of member accepting masks
};

enum class MecClass { accepting, rejecting, neutral };

/** accepting: covers every accepting set; rejecting: covers none;
 * neutral: covers some but not all. */
MecClass classify_mec(const EndComponent& ec, int num_sets);

std::string mec_class_name(MecClass c);

/** Standard iterative decomposition into maximal end components. */
std::vector<EndComponent> mec_decomposition(const ExplicitProduct& p);

/** The accepting MECs among a decomposition. */
std::vector<EndComponent> amec_set(const ExplicitProduct& p,
                                   const std::vector<EndComponent>& mecs);

struct ReachabilityResult {
    std::vector<double> value;       // per state
    std::vector<int> greedy_action;  // maximizing action index per state
    int sweeps = 0;
};

/**
 * Maximum probability of reaching the target set, by value iteration from
 * below with a graph precomputation of the probability-zero states.
 */
ReachabilityResult max_reach_probability(const ExplicitProduct& p,
                                         const std::vector<char>& target,
                                         double tol = 1e-10, int max_sweeps = 1'000'000);

/**
 * Maximum satisfaction probability: reachability of the union of accepting
 * MECs. Entering one, the controller can visit every accepting set
 * infinitely often with probability 1.
 */
ReachabilityResult max_satisfaction_probability(const ExplicitProduct& p,
                                                const std::vector<EndComponent>& mecs,
                                                double tol = 1e-10);

/** Deterministic memoryless policy on an explicit product: one action
 * index per state. */
using IndexPolicy = std::vector<int>;

struct RecurrentClass {
    std::vector<int> states;       // sorted
    std::uint32_t accept_cover = 0;
    bool reachable = false;        // from the initial state under the policy
};

/**
 * Recurrent classes of the chain induced by a policy (bottom strongly
 * connected components), with their accepting coverage. Under a tracking
 * frontier every class covers all accepting sets or none.
 */
std::vector<RecurrentClass> classify_recurrent_classes(const ExplicitProduct& p,
                                                       const IndexPolicy& pol);

/**
 * Probability that the chain induced by the policy reaches a recurrent
 * class covering every accepting set, evaluated at the initial state.
 */
double policy_satisfaction_probability(const ExplicitProduct& p, const IndexPolicy& pol,
                                       double tol = 1e-12);

struct BruteForceResult {
    bool any_satisfying = false;     // some policy has positive probability
    double best_probability = 0.0;
    IndexPolicy best_policy;
    long policies_checked = 0;
};

/**
 * Exhaustive sweep over all deterministic memoryless policies. Throws
 * std::runtime_error when the policy count exceeds the budget.
 */
BruteForceResult brute_force_deterministic_policies(const ExplicitProduct& p,
                                                    long budget = 10'000);

/**
 * Fixed point of V(x) = max_u [R(x) + gamma(x) * sum p(x,u,y) V(y)] by
 * value iteration; contraction factor max(r_f, gamma_f).
 */
ReachabilityResult discounted_value_iteration(const ExplicitProduct& p,
                                              const RewardConfig& cfg, double tol = 1e-12,
                                              int max_sweeps = 1'000'000);

/** Policy lookup table translated to per-state action indices; -1 marks
 * states the policy does not cover. */
IndexPolicy index_policy(const ExplicitProduct& p, const ProductEnv& env, const Policy& pol);

}  // namespace ltlsyn
