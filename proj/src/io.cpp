#include "ltlsyn/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ltlsyn {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::runtime_error(where + ": " + what);
}

const Json& field(const Json& doc, const char* name, const std::string& where) {
    auto it = doc.find(name);
    if (it == doc.end()) fail(where, std::string("missing field '") + name + "'");
    return *it;
}

std::vector<std::string> name_list(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of names");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) fail(where, "expected a string");
        out.push_back(e.get<std::string>());
    }
    return out;
}

int lookup(const std::vector<std::string>& names, const std::string& name,
           const std::string& where, const char* kind) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) fail(where, std::string("unknown ") + kind + " '" + name + "'");
    return static_cast<int>(it - names.begin());
}

PropSet letter_mask(const Json& j, const std::vector<std::string>& props,
                    const std::string& where) {
    PropSet mask = 0;
    for (const auto& name : name_list(j, where))
        mask |= PropSet{1} << lookup(props, name, where, "proposition");
    return mask;
}

Json mask_names(PropSet mask, const std::vector<std::string>& props) {
    Json out = Json::array();
    for (std::size_t i = 0; i < props.size(); ++i)
        if (mask & (PropSet{1} << i)) out.push_back(props[i]);
    return out;
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

}  // namespace

PLMDP plmdp_from_json(const Json& doc) {
    PLMDP m;
    m.states = name_list(field(doc, "states", "model"), "model.states");
    if (m.states.empty()) fail("model.states", "no states");
    m.atomic_props = name_list(field(doc, "atomic_props", "model"), "model.atomic_props");

    // An explicit action list pins the ids; otherwise first appearance wins.
    const bool fixed_actions = doc.contains("actions");
    if (fixed_actions) m.actions = name_list(doc["actions"], "model.actions");
    auto action_of = [&](const std::string& name, const std::string& where) {
        auto it = std::find(m.actions.begin(), m.actions.end(), name);
        if (it != m.actions.end()) return static_cast<int>(it - m.actions.begin());
        if (fixed_actions) fail(where, "unknown action '" + name + "'");
        m.actions.push_back(name);
        return static_cast<int>(m.actions.size()) - 1;
    };

    m.choices.resize(m.states.size());
    const Json& trans = field(doc, "transitions", "model");
    if (!trans.is_array()) fail("model.transitions", "expected an array");
    for (std::size_t i = 0; i < trans.size(); ++i) {
        const std::string where = "model.transitions[" + std::to_string(i) + "]";
        const Json& t = trans[i];
        int from = lookup(m.states, field(t, "from", where).get<std::string>(), where, "state");
        int to = lookup(m.states, field(t, "to", where).get<std::string>(), where, "state");
        int a = action_of(field(t, "action", where).get<std::string>(), where);
        double p = number(field(t, "p", where), where + ".p");
        auto& row = m.choices[from];
        auto it = std::find_if(row.begin(), row.end(),
                               [&](const PLMDP::Choice& c) { return c.action == a; });
        if (it == row.end()) {
            row.push_back({a, {}});
            it = row.end() - 1;
        }
        it->succ.emplace_back(to, p);
    }
    for (auto& row : m.choices)
        std::sort(row.begin(), row.end(),
                  [](const PLMDP::Choice& a, const PLMDP::Choice& b) { return a.action < b.action; });

    m.labels.assign(m.states.size(), {});
    if (doc.contains("labels")) {
        const Json& labels = doc["labels"];
        if (!labels.is_array()) fail("model.labels", "expected an array");
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const std::string where = "model.labels[" + std::to_string(i) + "]";
            const Json& e = labels[i];
            int s = lookup(m.states, field(e, "state", where).get<std::string>(), where, "state");
            PropSet mask = letter_mask(field(e, "label", where), m.atomic_props, where + ".label");
            m.labels[s].emplace_back(mask, number(field(e, "p", where), where + ".p"));
        }
    }
    for (auto& dist : m.labels)
        if (dist.empty()) dist.emplace_back(0, 1.0);

    const Json& init = field(doc, "initial", "model");
    m.initial_state = lookup(m.states, field(init, "state", "model.initial").get<std::string>(),
                             "model.initial.state", "state");
    m.initial_label =
        letter_mask(field(init, "label", "model.initial"), m.atomic_props, "model.initial.label");
    return m;
}

Json plmdp_to_json(const PLMDP& m) {
    Json doc;
    doc["states"] = m.states;
    doc["actions"] = m.actions;
    doc["atomic_props"] = m.atomic_props;
    doc["initial"] = {{"state", m.states[m.initial_state]},
                      {"label", mask_names(m.initial_label, m.atomic_props)}};
    Json trans = Json::array();
    for (std::size_t s = 0; s < m.states.size(); ++s)
        for (const auto& c : m.choices[s])
            for (const auto& [to, p] : c.succ)
                trans.push_back({{"from", m.states[s]},
                                 {"action", m.actions[c.action]},
                                 {"to", m.states[to]},
                                 {"p", p}});
    doc["transitions"] = std::move(trans);
    Json labels = Json::array();
    for (std::size_t s = 0; s < m.states.size(); ++s)
        for (const auto& [mask, p] : m.labels[s])
            labels.push_back(
                {{"state", m.states[s]}, {"label", mask_names(mask, m.atomic_props)}, {"p", p}});
    doc["labels"] = std::move(labels);
    return doc;
}

GridSpec grid_from_json(const Json& doc) {
    GridSpec g;
    g.width = static_cast<int>(number(field(doc, "width", "grid"), "grid.width"));
    g.height = static_cast<int>(number(field(doc, "height", "grid"), "grid.height"));
    g.slip = number(field(doc, "slip", "grid"), "grid.slip");
    const Json& init = field(doc, "initial_cell", "grid");
    if (!init.is_array() || init.size() != 2) fail("grid.initial_cell", "expected [row, col]");
    g.initial_cell = {init[0].get<int>(), init[1].get<int>()};
    if (doc.contains("cells")) {
        const Json& cells = doc["cells"];
        if (!cells.is_array()) fail("grid.cells", "expected an array");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::string where = "grid.cells[" + std::to_string(i) + "]";
            const Json& c = cells[i];
            const Json& at = field(c, "at", where);
            if (!at.is_array() || at.size() != 2) fail(where + ".at", "expected [row, col]");
            GridSpec::CellLabel cell;
            cell.row = at[0].get<int>();
            cell.col = at[1].get<int>();
            cell.props = name_list(field(c, "label", where), where + ".label");
            cell.p = c.contains("p") ? number(c["p"], where + ".p") : 1.0;
            g.cells.push_back(std::move(cell));
        }
    }
    return g;
}

Json grid_to_json(const GridSpec& g) {
    Json doc;
    doc["width"] = g.width;
    doc["height"] = g.height;
    doc["slip"] = g.slip;
    doc["initial_cell"] = {g.initial_cell.first, g.initial_cell.second};
    Json cells = Json::array();
    for (const auto& c : g.cells)
        cells.push_back({{"at", {c.row, c.col}}, {"label", c.props}, {"p", c.p}});
    doc["cells"] = std::move(cells);
    return doc;
}

LDGBA ldgba_from_json(const Json& doc) {
    LDGBA a;
    a.props = name_list(field(doc, "props", "automaton"), "automaton.props");
    if (a.props.size() > 16) fail("automaton.props", "more than 16 propositions");
    a.states = name_list(field(doc, "states", "automaton"), "automaton.states");
    if (a.states.empty()) fail("automaton.states", "no states");
    a.initial = lookup(a.states, field(doc, "initial", "automaton").get<std::string>(),
                       "automaton.initial", "state");

    a.deterministic.assign(a.states.size(), 2);  // 2 = unassigned
    for (const auto& name : name_list(field(doc, "q_d", "automaton"), "automaton.q_d"))
        a.deterministic[lookup(a.states, name, "automaton.q_d", "state")] = 1;
    for (const auto& name : name_list(field(doc, "q_n", "automaton"), "automaton.q_n")) {
        int q = lookup(a.states, name, "automaton.q_n", "state");
        if (a.deterministic[q] == 1) fail("automaton.q_n", "state '" + name + "' also in q_d");
        a.deterministic[q] = 0;
    }
    for (std::size_t q = 0; q < a.states.size(); ++q)
        if (a.deterministic[q] == 2)
            fail("automaton", "state '" + a.states[q] + "' in neither q_d nor q_n");

    a.delta.assign(a.states.size(), std::vector<std::vector<int>>(a.num_letters()));
    a.eps.assign(a.states.size(), {});

    const Json& trans = field(doc, "transitions", "automaton");
    if (!trans.is_array()) fail("automaton.transitions", "expected an array");
    for (std::size_t i = 0; i < trans.size(); ++i) {
        const std::string where = "automaton.transitions[" + std::to_string(i) + "]";
        const Json& t = trans[i];
        int from = lookup(a.states, field(t, "from", where).get<std::string>(), where, "state");
        int to = lookup(a.states, field(t, "to", where).get<std::string>(), where, "state");
        const Json& letters = field(t, "letters", where);
        if (letters.is_string() && letters.get<std::string>() == "any") {
            for (int l = 0; l < a.num_letters(); ++l) a.delta[from][l].push_back(to);
        } else if (letters.is_array()) {
            for (const auto& letter : letters)
                a.delta[from][letter_mask(letter, a.props, where + ".letters")].push_back(to);
        } else {
            fail(where + ".letters", "expected \"any\" or an array of letters");
        }
    }

    if (doc.contains("epsilon")) {
        const Json& eps = doc["epsilon"];
        if (!eps.is_array()) fail("automaton.epsilon", "expected an array");
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const std::string where = "automaton.epsilon[" + std::to_string(i) + "]";
            int from =
                lookup(a.states, field(eps[i], "from", where).get<std::string>(), where, "state");
            int to = lookup(a.states, field(eps[i], "to", where).get<std::string>(), where, "state");
            a.eps[from].push_back(to);
        }
    }

    const Json& acc = field(doc, "accepting", "automaton");
    if (!acc.is_array()) fail("automaton.accepting", "expected an array of state-name lists");
    if (acc.size() > 30) fail("automaton.accepting", "more than 30 accepting sets");
    for (std::size_t j = 0; j < acc.size(); ++j) {
        const std::string where = "automaton.accepting[" + std::to_string(j) + "]";
        std::vector<int> set;
        for (const auto& name : name_list(acc[j], where))
            set.push_back(lookup(a.states, name, where, "state"));
        a.accepting.push_back(std::move(set));
    }

    a.finalize();
    return a;
}

Json ldgba_to_json(const LDGBA& a) {
    Json doc;
    doc["props"] = a.props;
    doc["states"] = a.states;
    doc["initial"] = a.states[a.initial];
    Json qd = Json::array(), qn = Json::array();
    for (std::size_t q = 0; q < a.states.size(); ++q)
        (a.deterministic[q] ? qd : qn).push_back(a.states[q]);
    doc["q_d"] = std::move(qd);
    doc["q_n"] = std::move(qn);

    Json trans = Json::array();
    for (std::size_t from = 0; from < a.states.size(); ++from) {
        // letters grouped per (from, to) pair, in target then letter order
        std::map<int, Json> per_target;
        for (int l = 0; l < a.num_letters(); ++l)
            for (int to : a.delta[from][l])
                per_target.try_emplace(to, Json::array())
                    .first->second.push_back(mask_names(static_cast<PropSet>(l), a.props));
        for (auto& [to, letters] : per_target)
            trans.push_back({{"from", a.states[from]},
                             {"letters", std::move(letters)},
                             {"to", a.states[to]}});
    }
    doc["transitions"] = std::move(trans);

    Json eps = Json::array();
    for (std::size_t from = 0; from < a.states.size(); ++from)
        for (int to : a.eps[from])
            eps.push_back({{"from", a.states[from]}, {"to", a.states[to]}});
    doc["epsilon"] = std::move(eps);

    Json acc = Json::array();
    for (const auto& set : a.accepting) {
        Json names = Json::array();
        for (int q : set) names.push_back(a.states[q]);
        acc.push_back(std::move(names));
    }
    doc["accepting"] = std::move(acc);
    return doc;
}

PLMDP load_model_file(const std::string& path) {
    Json doc = read_json_file(path);
    if (doc.contains("width")) return build_grid_env(grid_from_json(doc));
    return plmdp_from_json(doc);
}

LDGBA load_automaton_file(const std::string& path) {
    return ldgba_from_json(read_json_file(path));
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    Json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return doc;
}

void write_json_file(const std::string& path, const Json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // trim to the shortest form that still round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

std::string encode_action(const ProductEnv& env, const ProductAction& u) {
    if (u.is_eps) return "eps->" + env.automaton().states[u.index];
    return env.model().actions[u.index];
}

ProductAction decode_action(const ProductEnv& env, const std::string& text) {
    if (text.rfind("eps->", 0) == 0)
        return {true, env.automaton().state_id(text.substr(5))};
    return {false, env.model().action_id(text)};
}

namespace {

template <typename T, typename Encode>
Json keyed_sorted(const ProductEnv& env,
                  const std::unordered_map<ProductState, T, ProductStateHash>& map,
                  Encode encode) {
    std::vector<std::pair<std::string, const T*>> rows;
    rows.reserve(map.size());
    for (const auto& [x, v] : map) rows.emplace_back(env.state_key(x), &v);
    std::sort(rows.begin(), rows.end());
    Json out = Json::object();
    for (const auto& [key, v] : rows) out[key] = encode(*v);
    return out;
}

}  // namespace

Json policy_to_json(const ProductEnv& env, const Policy& pol) {
    return keyed_sorted(env, pol,
                        [&](const ProductAction& u) { return encode_action(env, u); });
}

Json values_to_json(const ProductEnv& env, const ValueMap& values) {
    return keyed_sorted(env, values, [](double v) { return v; });
}

Json product_to_json(const ProductEnv& env, const ExplicitProduct& p) {
    Json doc;
    doc["num_states"] = p.states.size();
    doc["num_accepting_sets"] = p.num_sets;
    doc["initial"] = p.initial;
    Json states = Json::array();
    for (std::size_t i = 0; i < p.states.size(); ++i)
        states.push_back({{"id", i},
                          {"key", env.state_key(p.states[i])},
                          {"accepting", p.accept[i]}});
    doc["states"] = std::move(states);
    Json sets = Json::array();
    for (int j = 0; j < p.num_sets; ++j) {
        Json members = Json::array();
        for (std::size_t i = 0; i < p.states.size(); ++i)
            if (p.accept[i] & (std::uint32_t{1} << j)) members.push_back(i);
        sets.push_back(std::move(members));
    }
    doc["accepting_sets"] = std::move(sets);
    Json trans = Json::array();
    for (std::size_t i = 0; i < p.states.size(); ++i)
        for (std::size_t k = 0; k < p.actions[i].size(); ++k) {
            Json succ = Json::array();
            for (const auto& [to, prob] : p.trans[i][k])
                succ.push_back({{"to", to}, {"p", prob}});
            trans.push_back({{"from", i},
                             {"action", encode_action(env, p.actions[i][k])},
                             {"succ", std::move(succ)}});
        }
    doc["transitions"] = std::move(trans);
    return doc;
}

Json oracle_report_json(const ProductEnv& env, const ExplicitProduct& p,
                        const std::vector<EndComponent>& mecs,
                        const ReachabilityResult& reach) {
    Json doc;
    doc["num_states"] = p.states.size();
    doc["num_accepting_sets"] = p.num_sets;
    Json mec_list = Json::array();
    int accepting = 0;
    for (const auto& ec : mecs) {
        MecClass cls = classify_mec(ec, p.num_sets);
        if (cls == MecClass::accepting) ++accepting;
        Json keys = Json::array();
        for (int v : ec.states) keys.push_back(env.state_key(p.states[v]));
        mec_list.push_back({{"class", mec_class_name(cls)},
                            {"num_states", ec.states.size()},
                            {"accept_cover", ec.accept_cover},
                            {"states", std::move(keys)}});
    }
    doc["mecs"] = std::move(mec_list);
    doc["num_accepting_mecs"] = accepting;
    doc["max_probability_initial"] = reach.value[p.initial];
    Json per_state = Json::object();
    {
        std::vector<std::pair<std::string, double>> rows;
        for (std::size_t i = 0; i < p.states.size(); ++i)
            rows.emplace_back(env.state_key(p.states[i]), reach.value[i]);
        std::sort(rows.begin(), rows.end());
        for (const auto& [key, v] : rows) per_state[key] = v;
    }
    doc["max_probability"] = std::move(per_state);
    return doc;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "episode,cumulative_reward,steps,value_at_x0\n";
    for (const auto& pt : curve) {
        out += std::to_string(pt.episode);
        out += ',';
        out += format_double(pt.cumulative_reward);
        out += ',';
        out += std::to_string(pt.steps);
        out += ',';
        out += format_double(pt.value_at_initial);
        out += '\n';
    }
    return out;
}

}  // namespace ltlsyn
