#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltlsyn/automaton.hpp"
#include "ltlsyn/types.hpp"

namespace ltlsyn {

/**
 * Reset discipline for the tracking frontier. "immediate" starts the next
 * round in the same update that finished the previous one, so the pending
 * set of a reachable state is never empty. "deferred" leaves the emptied
 * set in place and resets at the next accepting visit; until then the empty
 * frontier scores as the full one, so that restarting visit still earns its
 * credit. Both accept the same language.
 */
enum class ResetMode { immediate, deferred };

/** Frontier a visit is scored against: the pending set itself, or the full
 * set when the round has emptied and awaits its deferred reset. */
FrontierSet scoring_frontier(FrontierSet pending, int num_sets);

/**
 * One frontier update for a visit to a state with accepting-set membership
 * hit_mask (bit j-1 <=> member of set j). Removes every pending set the
 * state belongs to; when that finishes the round, the next round starts
 * with the sets this visit was credited for already discharged. If the
 * visit credited every set, the new round is the full set, so a live round
 * always remains.
 */
FrontierSet frontier_update(FrontierSet pending, std::uint32_t hit_mask, int num_sets,
                            ResetMode mode = ResetMode::immediate);

/** Convenience overload reading hit_mask from the automaton. */
FrontierSet frontier_update(const LDGBA& a, int q, FrontierSet pending,
                            ResetMode mode = ResetMode::immediate);

/** Automaton state paired with the pending accepting sets of its round. */
struct EmbeddedState {
    int q = 0;
    FrontierSet pending = 0;

    bool operator==(const EmbeddedState& o) const {
        return q == o.q && pending == o.pending;
    }
};

/**
 * True when the state sits in accepting set j (1-based) and that set is
 * still pending, i.e. the visit counts toward the current round. An empty
 * frontier counts as freshly reset. Throws std::out_of_range for j outside
 * 1..f.
 */
bool is_accepting_embedded(const LDGBA& a, const EmbeddedState& x, int j);

struct EmbeddedStep {
    EmbeddedState to;
    std::uint32_t flags = 0;  // accepting sets credited by this step
};

/**
 * Successors of (q, pending) on a letter, or on epsilon when letter is
 * empty. Flags report the accepting sets of the target against the
 * pre-update frontier; the returned pending set has the target's visit
 * already credited. Epsilon steps consume no letter; their targets pass
 * through the same bookkeeping (an epsilon target is never accepting while
 * its sets are untouched unless it belongs to one, in which case the flags
 * say so).
 */
std::vector<EmbeddedStep> eldgba_step(const LDGBA& a, const EmbeddedState& x,
                                      std::optional<PropSet> letter,
                                      ResetMode mode = ResetMode::immediate);

/**
 * Run of the embedded automaton over the first `length` letters of a word.
 * states[0] is (initial, full frontier); states[i+1] pairs the state
 * reached after letter i with the frontier before its visit is credited,
 * so is_accepting_embedded(states[i+1], j) holds exactly when flags[i] has
 * bit j-1. Nondeterministic letter choices take the lowest successor id;
 * an undefined transition truncates the run and fills `diagnostic`.
 */
struct EmbeddedRun {
    std::vector<EmbeddedState> states;
    std::vector<std::uint32_t> flags;
    bool complete = true;
    std::string diagnostic;
};

EmbeddedRun generate_run(const LDGBA& a, const std::vector<PropSet>& word, int length,
                         ResetMode mode = ResetMode::immediate);

/**
 * Exact acceptance of a lasso by the embedded automaton: searches the
 * (q, pending, position) graph for a reachable strongly connected component
 * with an edge whose states cover every accepting set, pending-aware.
 */
bool embedded_lasso_accepted(const LDGBA& a, const Lasso& w,
                             ResetMode mode = ResetMode::immediate);

}  // namespace ltlsyn
