#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ltlsyn/types.hpp"

namespace ltlsyn {

/**
 * Reward and discount shaping for accepting visits. A state whose pending
 * accepting sets are hit pays 1 - r_f and discounts its continuation by
 * r_f; every other state pays 0 and discounts by gamma_f. With both factors
 * below 1 the return of any infinite path stays in [0, 1], and the return
 * approaches the satisfaction probability as gamma_f approaches 1.
 */
struct RewardConfig {
    double r_f = 0.99;
    double gamma_f = 0.9999;
};

/** Reward of a state given its pending-aware accepting flags. */
inline double reward_of(std::uint32_t accept_flags, const RewardConfig& cfg) {
    return accept_flags != 0 ? 1.0 - cfg.r_f : 0.0;
}

/** State-dependent discount applied to everything after the state. */
inline double discount_of(std::uint32_t accept_flags, const RewardConfig& cfg) {
    return accept_flags != 0 ? cfg.r_f : cfg.gamma_f;
}

struct PathReturn {
    double value = 0.0;
    // Upper bound on what any continuation could still add.
    double truncation_error_bound = 0.0;
};

/**
 * Finite-horizon return sum_i (prod_{j<i} gamma(x_j)) * R(x_i) for a path
 * given per-state accepting flags; the empty product is 1.
 */
PathReturn path_return(const std::vector<std::uint32_t>& path_flags, const RewardConfig& cfg);

/**
 * Checks the sandwich 0 <= gamma_f * D(suffix) <= D(path) <= 1 - r_f +
 * r_f * D(suffix) <= 1 over matched truncation horizons, where the suffix
 * drops the first state. Requires at least two states. The four slack
 * values are reported in chain order; all must be nonnegative up to float
 * roundoff.
 */
struct ReturnBounds {
    bool holds = false;
    std::array<double, 4> slack{};
    double path_value = 0.0;
    double suffix_value = 0.0;
};

ReturnBounds check_return_bounds(const std::vector<std::uint32_t>& path_flags,
                                 const RewardConfig& cfg, double tolerance = 1e-9);

}  // namespace ltlsyn
