#include "ltlsyn/plmdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ltlsyn {

namespace {

int index_of(const std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

}  // namespace

int PLMDP::state_id(const std::string& name) const { return index_of(states, name); }
int PLMDP::action_id(const std::string& name) const { return index_of(actions, name); }
int PLMDP::prop_id(const std::string& name) const { return index_of(atomic_props, name); }

std::string PLMDP::label_string(PropSet l) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < atomic_props.size(); ++i) {
        if (l & (PropSet{1} << i)) {
            if (!first) out += ",";
            out += atomic_props[i];
            first = false;
        }
    }
    out += "}";
    return out;
}

const PLMDP::Choice* PLMDP::find_choice(int s, int a) const {
    for (const auto& c : choices[s])
        if (c.action == a) return &c;
    return nullptr;
}

std::vector<int> PLMDP::available_actions(int s) const {
    std::vector<int> out;
    out.reserve(choices[s].size());
    for (const auto& c : choices[s]) out.push_back(c.action);
    return out;
}

ValidationReport validate_plmdp(const PLMDP& m) {
    ValidationReport rep;
    const int n = static_cast<int>(m.states.size());
    if (n == 0) rep.add("states", "model has no states");
    if (m.atomic_props.size() > 20) rep.add("atomic_props", "more than 20 propositions");
    if (static_cast<int>(m.choices.size()) != n || static_cast<int>(m.labels.size()) != n) {
        rep.add("model", "per-state tables do not match the state count");
        return rep;
    }

    for (int s = 0; s < n; ++s) {
        if (m.choices[s].empty())
            rep.add("state " + m.states[s], "no available actions");
        for (const auto& c : m.choices[s]) {
            if (c.action < 0 || c.action >= static_cast<int>(m.actions.size())) {
                rep.add("state " + m.states[s], "choice with out-of-range action id");
                continue;
            }
            double sum = 0.0;
            for (const auto& [to, p] : c.succ) {
                if (to < 0 || to >= n)
                    rep.add("state " + m.states[s] + ", action " + m.actions[c.action],
                            "successor id out of range");
                if (p < 0.0)
                    rep.add("state " + m.states[s] + ", action " + m.actions[c.action],
                            "negative transition probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > kProbTolerance) {
                std::ostringstream os;
                os << "transition probabilities sum to " << sum;
                rep.add("state " + m.states[s] + ", action " + m.actions[c.action], os.str());
            }
        }

        double lsum = 0.0;
        for (const auto& [mask, p] : m.labels[s]) {
            if (p < 0.0) rep.add("state " + m.states[s], "negative label probability");
            if (m.atomic_props.size() < 32 && (mask >> m.atomic_props.size()) != 0)
                rep.add("state " + m.states[s], "label uses undeclared propositions");
            lsum += p;
        }
        if (std::abs(lsum - 1.0) > kProbTolerance) {
            std::ostringstream os;
            os << "label probabilities sum to " << lsum;
            rep.add("state " + m.states[s], os.str());
        }
    }

    if (m.initial_state < 0 || m.initial_state >= n) {
        rep.add("initial", "initial state out of range");
    } else {
        double p0 = 0.0;
        for (const auto& [mask, p] : m.labels[m.initial_state])
            if (mask == m.initial_label) p0 += p;
        if (p0 <= 0.0)
            rep.add("initial", "initial label has zero probability at the initial state");
    }
    return rep;
}

PLMDPStep sample_step(const PLMDP& m, int s, int a, Rng& rng) {
    const PLMDP::Choice* c = m.find_choice(s, a);
    if (c == nullptr)
        throw std::invalid_argument("sample_step: action " + std::to_string(a) +
                                    " not available at state " + std::to_string(s));
    int next = sample_discrete(rng, c->succ);
    PropSet label = sample_discrete(rng, m.labels[next]);
    return {next, label};
}

std::string grid_state_name(int row, int col) {
    return "c" + std::to_string(row) + "_" + std::to_string(col);
}

PLMDP build_grid_env(const GridSpec& g) {
    if (g.width <= 0 || g.height <= 0)
        throw std::invalid_argument("build_grid_env: nonpositive dimensions");
    if (g.slip < 0.0 || g.slip >= 1.0)
        throw std::invalid_argument("build_grid_env: slip must be in [0,1)");
    if (g.initial_cell.first < 0 || g.initial_cell.first >= g.height ||
        g.initial_cell.second < 0 || g.initial_cell.second >= g.width)
        throw std::invalid_argument("build_grid_env: initial cell out of range");

    PLMDP m;
    m.actions = {"N", "S", "E", "W", "R"};
    for (const auto& c : g.cells)
        for (const auto& p : c.props)
            if (std::find(m.atomic_props.begin(), m.atomic_props.end(), p) ==
                m.atomic_props.end())
                m.atomic_props.push_back(p);
    if (m.atomic_props.size() > 20)
        throw std::invalid_argument("build_grid_env: more than 20 propositions");

    const int n = g.width * g.height;
    m.states.reserve(n);
    for (int r = 0; r < g.height; ++r)
        for (int c = 0; c < g.width; ++c) m.states.push_back(grid_state_name(r, c));

    auto mask_of = [&](const std::vector<std::string>& props) {
        PropSet mask = 0;
        for (const auto& p : props) {
            int id = m.prop_id(p);
            mask |= PropSet{1} << id;
        }
        return mask;
    };

    // Label distributions; unassigned mass goes to the empty label.
    m.labels.assign(n, {});
    std::vector<double> assigned(n, 0.0);
    for (const auto& c : g.cells) {
        if (c.row < 0 || c.row >= g.height || c.col < 0 || c.col >= g.width)
            throw std::invalid_argument("build_grid_env: labeled cell out of range");
        if (c.p < 0.0) throw std::invalid_argument("build_grid_env: negative label probability");
        int s = c.row * g.width + c.col;
        m.labels[s].emplace_back(mask_of(c.props), c.p);
        assigned[s] += c.p;
    }
    for (int s = 0; s < n; ++s) {
        if (assigned[s] > 1.0 + kProbTolerance)
            throw std::invalid_argument("build_grid_env: label probabilities exceed 1 at " +
                                        m.states[s]);
        double rest = 1.0 - assigned[s];
        if (rest > kProbTolerance) m.labels[s].emplace_back(PropSet{0}, rest);
    }

    // Movement: (dr, dc) per action; lateral slip directions per action.
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, 1, -1};
    const int lateral[4][2] = {{kEast, kWest}, {kEast, kWest}, {kNorth, kSouth}, {kNorth, kSouth}};

    auto target = [&](int r, int c, int dir) -> int {
        int nr = r + dr[dir];
        int nc = c + dc[dir];
        if (nr < 0 || nr >= g.height || nc < 0 || nc >= g.width) return r * g.width + c;
        return nr * g.width + nc;
    };

    m.choices.assign(n, {});
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            int s = r * g.width + c;
            for (int a = 0; a < 4; ++a) {
                std::map<int, double> acc;
                acc[target(r, c, a)] += 1.0 - g.slip;
                acc[target(r, c, lateral[a][0])] += g.slip / 2.0;
                acc[target(r, c, lateral[a][1])] += g.slip / 2.0;
                PLMDP::Choice ch;
                ch.action = a;
                for (const auto& [to, p] : acc) ch.succ.emplace_back(to, p);
                m.choices[s].push_back(std::move(ch));
            }
            PLMDP::Choice rest;
            rest.action = kRest;
            rest.succ.emplace_back(s, 1.0);
            m.choices[s].push_back(std::move(rest));
        }
    }

    m.initial_state = g.initial_cell.first * g.width + g.initial_cell.second;
    // The declared initial label is the most likely label of the start cell.
    PropSet best = 0;
    double bestp = -1.0;
    for (const auto& [mask, p] : m.labels[m.initial_state])
        if (p > bestp) {
            best = mask;
            bestp = p;
        }
    m.initial_label = best;
    return m;
}

}  // namespace ltlsyn
