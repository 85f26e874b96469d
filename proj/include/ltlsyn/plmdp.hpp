#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltlsyn/types.hpp"

namespace ltlsyn {

/**
 * Labeled MDP whose state labels are themselves probabilistic: next to the
 * usual transition kernel, every state carries a distribution over subsets
 * of the atomic propositions. Observing a state draws a label from that
 * distribution.
 */
struct PLMDP {
    struct Choice {
        int action = -1;                               // id into actions
        std::vector<std::pair<int, double>> succ;      // (state id, probability)
    };

    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::string> atomic_props;             // at most 20

    // choices[s] sorted by action id; a state's available action set is
    // exactly the actions listed here.
    std::vector<std::vector<Choice>> choices;

    // labels[s]: distribution over PropSet masks, entries in listed order.
    std::vector<std::vector<std::pair<PropSet, double>>> labels;

    int initial_state = 0;
    PropSet initial_label = 0;

    int state_id(const std::string& name) const;
    int action_id(const std::string& name) const;
    int prop_id(const std::string& name) const;
    std::string label_string(PropSet l) const;

    const Choice* find_choice(int s, int a) const;
    std::vector<int> available_actions(int s) const;
};

// Row sums and label sums must hit 1 within this tolerance.
inline constexpr double kProbTolerance = 1e-12;

/**
 * Structural checks: transition rows sum to 1, label distributions sum to 1,
 * every state has at least one action, the initial label has positive
 * probability at the initial state, all probabilities are nonnegative.
 */
ValidationReport validate_plmdp(const PLMDP& m);

struct PLMDPStep {
    int state;
    PropSet label;
};

/**
 * Samples a successor and its label for action a at state s.
 * Throws std::invalid_argument if a is not available at s.
 */
PLMDPStep sample_step(const PLMDP& m, int s, int a, Rng& rng);

/**
 * Rectangular gridworld with slip dynamics. Actions are N, S, E, W and R.
 * A move succeeds with probability 1 - slip and drifts to each lateral
 * neighbour with slip/2; off-grid mass is reassigned to staying put. R is a
 * deterministic self-loop. Cells may carry a distribution over labels; any
 * probability mass a cell leaves unassigned goes to the empty label.
 */
struct GridSpec {
    int width = 0;
    int height = 0;
    double slip = 0.1;
    std::pair<int, int> initial_cell{0, 0};  // (row, col)

    struct CellLabel {
        int row = 0;
        int col = 0;
        std::vector<std::string> props;
        double p = 1.0;
    };
    std::vector<CellLabel> cells;
};

// Grid action ids in the built model.
enum GridAction : int { kNorth = 0, kSouth = 1, kEast = 2, kWest = 3, kRest = 4 };

/** Expands a grid description into an explicit PLMDP. Throws on bad specs. */
PLMDP build_grid_env(const GridSpec& g);

/** Cell (row, col) -> state id in a grid-built model. */
inline int grid_state(const GridSpec& g, int row, int col) { return row * g.width + col; }

std::string grid_state_name(int row, int col);

}  // namespace ltlsyn
