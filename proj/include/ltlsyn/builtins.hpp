#pragma once

#include <string>
#include <vector>

#include "ltlsyn/automaton.hpp"
#include "ltlsyn/plmdp.hpp"

namespace ltlsyn {

/**
 * Three-state shuttle with deterministic labels: a hub s0 labeled r0 and two
 * satellites s1/s2 labeled r1/r2, with hop and stay actions between them.
 * The smallest model on which frontier tracking changes what deterministic
 * policies can achieve.
 */
PLMDP hub3_model();

/** Task "visit r1 and r2 each infinitely often", two accepting sets.
 * Exact on mutually exclusive labels; letters containing both props are
 * resolved in favour of r1. */
LDGBA phi_e();

/** Task "eventually stay in t forever, never touch u", one accepting set,
 * with a nondeterministic wait state and an epsilon guess. */
LDGBA phi_case1();

/** Surveillance task "visit base1, base2, base3 each infinitely often while
 * avoiding obs", three accepting sets. Exact over the full alphabet. */
LDGBA phi_case2();

/** The surveillance task plus a supply rule: after each sply visit, no new
 * sply until some base is reached. Three accepting sets. */
LDGBA phi_case3();

/** 3x4 gridworld with two absorbing targets t, two unsafe cells u. */
GridSpec target_grid_spec();

/** Square surveillance gridworld: three bases in the corners and mid edge,
 * a supply cell, an uncertain obstacle near the centre. side >= 5. */
GridSpec surveillance_grid_spec(int side = 5);

/** Lookup by name: hub3, grid_case1, grid_case2, grid_case2_15,
 * grid_case2_25, grid_case2_40. Throws std::invalid_argument otherwise. */
PLMDP builtin_model(const std::string& name);

/** Lookup by name: phi_e, phi_case1, phi_case2, phi_case3.
 * Throws std::invalid_argument otherwise. */
LDGBA builtin_automaton(const std::string& name);

/** Grid geometry behind a builtin model name, if it is grid based. */
bool builtin_grid_spec(const std::string& name, GridSpec& out);

std::vector<std::string> builtin_model_names();
std::vector<std::string> builtin_automaton_names();

}  // namespace ltlsyn
