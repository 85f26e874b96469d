#pragma once

#include <string>
#include <vector>

#include "ltlsyn/types.hpp"

namespace ltlsyn {

/**
 * Limit-deterministic generalized Buchi automaton. States are split into a
 * deterministic part (Q_D) and a nondeterministic part (Q_N); besides letter
 * transitions, Q_N states may take epsilon jumps into Q_D. Acceptance is
 * generalized: a run is accepting when it visits every accepting set
 * infinitely often. The invariants enforced by validate_ldgba:
 *
 *  - every Q_D state has exactly one successor per letter, inside Q_D;
 *  - epsilon transitions start in Q_N and end in Q_D, never leave Q_D;
 *  - every accepting set is contained in Q_D.
 *
 * Letters are subsets of props encoded as bitmasks; delta is stored densely
 * over all 2^|props| letters (props capped at 16). An empty successor list
 * means the transition is undefined, which is allowed in Q_N only.
 */
struct LDGBA {
    std::vector<std::string> props;
    std::vector<std::string> states;
    int initial = 0;
    std::vector<std::uint8_t> deterministic;          // 1 <=> state in Q_D
    std::vector<std::vector<std::vector<int>>> delta; // [state][letter] -> successors
    std::vector<std::vector<int>> eps;                // [state] -> successors
    std::vector<std::vector<int>> accepting;          // F_1..F_f as state id lists
    std::vector<std::uint32_t> accept_mask;           // bit j-1 <=> state in F_j

    int num_letters() const { return 1 << props.size(); }
    int num_sets() const { return static_cast<int>(accepting.size()); }
    FrontierSet full_frontier() const { return (FrontierSet{1} << num_sets()) - 1; }

    int state_id(const std::string& name) const;
    int prop_id(const std::string& name) const;
    std::string letter_string(PropSet letter) const;

    /** Rebuilds accept_mask and sorts successor lists; call after edits. */
    void finalize();
};

/** Checks the structural invariants above; each is reported separately. */
ValidationReport validate_ldgba(const LDGBA& a);

/** Ultimately periodic word prefix . cycle^omega; cycle must be nonempty. */
struct Lasso {
    std::vector<PropSet> prefix;
    std::vector<PropSet> cycle;
};

/**
 * Exact acceptance of a lasso word: explores the (state, position) graph,
 * epsilon moves allowed anywhere, and looks for a reachable strongly
 * connected component with an edge that meets every accepting set.
 */
bool lasso_accepted(const LDGBA& a, const Lasso& w);

/**
 * Round-robin counter construction collapsing the accepting sets into one:
 * states are (q, i) pairs, the counter advances past level i when an F_i
 * state is left, and the single accepting set is F_1 x {1}. The result
 * accepts the same language and is again limit deterministic.
 */
LDGBA degeneralize(const LDGBA& a);

}  // namespace ltlsyn
