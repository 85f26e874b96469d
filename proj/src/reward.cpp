#include "ltlsyn/reward.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltlsyn {

PathReturn path_return(const std::vector<std::uint32_t>& path_flags, const RewardConfig& cfg) {
    PathReturn out;
    double weight = 1.0;
    for (std::uint32_t flags : path_flags) {
        out.value += weight * reward_of(flags, cfg);
        weight *= discount_of(flags, cfg);
    }
    // The tail return is at most 1, discounted by the accumulated weight.
    out.truncation_error_bound = weight;
    return out;
}

ReturnBounds check_return_bounds(const std::vector<std::uint32_t>& path_flags,
                                 const RewardConfig& cfg, double tolerance) {
    if (path_flags.size() < 2)
        throw std::invalid_argument("check_return_bounds: need at least two states");
    ReturnBounds out;
    out.path_value = path_return(path_flags, cfg).value;
    std::vector<std::uint32_t> suffix(path_flags.begin() + 1, path_flags.end());
    out.suffix_value = path_return(suffix, cfg).value;

    double lower = cfg.gamma_f * out.suffix_value;
    double upper = 1.0 - cfg.r_f + cfg.r_f * out.suffix_value;
    out.slack[0] = lower;                    // 0 <= gamma_f * D(suffix)
    out.slack[1] = out.path_value - lower;   // gamma_f * D(suffix) <= D
    out.slack[2] = upper - out.path_value;   // D <= 1 - r_f + r_f * D(suffix)
    out.slack[3] = 1.0 - upper;              // 1 - r_f + r_f * D(suffix) <= 1
    out.holds = std::all_of(out.slack.begin(), out.slack.end(),
                            [&](double s) { return s >= -tolerance; });
    return out;
}

}  // namespace ltlsyn
