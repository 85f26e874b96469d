#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltlsyn {

// A letter of the automaton alphabet / a label of a model state: a set of
// atomic propositions encoded as a bitmask over the owning object's
// proposition list.
using PropSet = std::uint32_t;

// Pending accepting-set indices, bit j-1 <=> set j still unvisited in the
// current round.
using FrontierSet = std::uint32_t;

using Rng = std::mt19937_64;

// Uniform double in [0,1), identical across platforms for a given engine
// state (std::uniform_real_distribution is not pinned by the standard).
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0,n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

// Walks the cumulative distribution of (item, probability) pairs.
template <typename T>
const T& sample_discrete(Rng& rng, const std::vector<std::pair<T, double>>& dist) {
    if (dist.empty()) throw std::invalid_argument("sample_discrete: empty distribution");
    double u = uniform01(rng);
    double acc = 0.0;
    for (const auto& [item, p] : dist) {
        acc += p;
        if (u < acc) return item;
    }
    return dist.back().first;
}

struct Violation {
    std::string where;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string where, std::string message) {
        violations.push_back({std::move(where), std::move(message)});
    }
    std::string to_string() const {
        std::string out;
        for (const auto& v : violations) {
            out += v.where;
            out += ": ";
            out += v.message;
            out += '\n';
        }
        return out;
    }
};

inline int popcount32(std::uint32_t x) {
    int n = 0;
    while (x) {
        x &= x - 1;
        ++n;
    }
    return n;
}

}  // namespace ltlsyn
