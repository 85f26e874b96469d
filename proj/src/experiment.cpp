#include "ltlsyn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <thread>

#include "ltlsyn/builtins.hpp"

namespace ltlsyn {

std::unique_ptr<EnvBundle> make_env_bundle(PLMDP model, LDGBA automaton,
                                           const std::string& mode, RewardConfig rcfg,
                                           ResetMode rmode) {
    auto bundle = std::make_unique<EnvBundle>();
    bundle->model = std::move(model);
    FrontierMode fmode = FrontierMode::tracking;
    if (mode == "eldgba") {
        bundle->automaton = std::move(automaton);
    } else if (mode == "ldba-baseline") {
        bundle->automaton = degeneralize(automaton);
    } else if (mode == "frozen-frontier") {
        bundle->automaton = std::move(automaton);
        fmode = FrontierMode::frozen;
    } else {
        throw std::invalid_argument("unknown mode '" + mode +
                                    "' (expected eldgba, ldba-baseline or frozen-frontier)");
    }
    bundle->env = std::make_unique<ProductEnv>(bundle->model, bundle->automaton, fmode, rmode, rcfg);
    return bundle;
}

PLMDP resolve_model(const std::string& name_or_path, GridSpec* grid_out, bool* is_grid) {
    if (is_grid) *is_grid = false;
    GridSpec g;
    if (builtin_grid_spec(name_or_path, g)) {
        if (grid_out) *grid_out = g;
        if (is_grid) *is_grid = true;
        return build_grid_env(g);
    }
    const auto names = builtin_model_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end())
        return builtin_model(name_or_path);
    Json doc = read_json_file(name_or_path);
    if (doc.contains("width")) {
        g = grid_from_json(doc);
        if (grid_out) *grid_out = g;
        if (is_grid) *is_grid = true;
        return build_grid_env(g);
    }
    return plmdp_from_json(doc);
}

LDGBA resolve_automaton(const std::string& name_or_path) {
    const auto names = builtin_automaton_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end())
        return builtin_automaton(name_or_path);
    return load_automaton_file(name_or_path);
}

void apply_config_json(ExperimentConfig& cfg, const Json& doc) {
    for (const auto& [key, value] : doc.items()) {
        if (key == "model")
            cfg.model = value.get<std::string>();
        else if (key == "automaton")
            cfg.automaton = value.get<std::string>();
        else if (key == "mode")
            cfg.mode = value.get<std::string>();
        else if (key == "episodes")
            cfg.learn.episodes = value.get<long>();
        else if (key == "tau")
            cfg.learn.tau = value.get<int>();
        else if (key == "seed")
            cfg.learn.seed = value.get<std::uint64_t>();
        else if (key == "eps_floor")
            cfg.learn.eps_floor = value.get<double>();
        else if (key == "eps_floor_after")
            cfg.learn.eps_floor_after = value.get<long>();
        else if (key == "alpha_floor")
            cfg.learn.alpha_floor = value.get<double>();
        else if (key == "q_init")
            cfg.learn.q_init = value.get<double>();
        else if (key == "window")
            cfg.learn.window = value.get<int>();
        else if (key == "window_tol")
            cfg.learn.window_tol = value.get<double>();
        else if (key == "r_f")
            cfg.reward.r_f = value.get<double>();
        else if (key == "gamma_f")
            cfg.reward.gamma_f = value.get<double>();
        else if (key == "repetitions")
            cfg.repetitions = value.get<int>();
        else if (key == "out_dir")
            cfg.out_dir = value.get<std::string>();
        else if (key == "oracle_cap")
            cfg.oracle_cap = value.get<std::size_t>();
        else if (key == "write_product")
            cfg.write_product = value.get<bool>();
        else
            throw std::runtime_error("config: unknown key '" + key + "'");
    }
}

std::vector<AggregatePoint> aggregate_curves(const std::vector<std::vector<CurvePoint>>& curves) {
    std::vector<AggregatePoint> out;
    if (curves.empty()) return out;
    std::size_t len = curves.front().size();
    for (const auto& c : curves) len = std::min(len, c.size());
    const double n = static_cast<double>(curves.size());
    for (std::size_t i = 0; i < len; ++i) {
        AggregatePoint pt;
        pt.episode = curves.front()[i].episode;
        double sr = 0.0, sv = 0.0;
        for (const auto& c : curves) {
            sr += c[i].cumulative_reward;
            sv += c[i].value_at_initial;
        }
        pt.mean_reward = sr / n;
        pt.mean_value = sv / n;
        double vr = 0.0, vv = 0.0;
        for (const auto& c : curves) {
            vr += (c[i].cumulative_reward - pt.mean_reward) * (c[i].cumulative_reward - pt.mean_reward);
            vv += (c[i].value_at_initial - pt.mean_value) * (c[i].value_at_initial - pt.mean_value);
        }
        pt.std_reward = std::sqrt(vr / n);
        pt.std_value = std::sqrt(vv / n);
        out.push_back(pt);
    }
    return out;
}

long crossing_episode(const std::vector<AggregatePoint>& agg) {
    if (agg.empty()) return -1;
    const double target = 0.5 * agg.back().mean_reward;
    if (agg.back().mean_reward <= 0.0) return -1;
    for (const auto& pt : agg)
        if (pt.mean_reward >= target) return pt.episode;
    return -1;
}

namespace {

std::string aggregate_csv(const std::vector<AggregatePoint>& agg) {
    std::string out =
        "# std is the population standard deviation across repetitions\n"
        "episode,mean_reward,std_reward,mean_value_at_x0,std_value_at_x0\n";
    for (const auto& pt : agg) {
        out += std::to_string(pt.episode);
        out += ',';
        out += format_double(pt.mean_reward);
        out += ',';
        out += format_double(pt.std_reward);
        out += ',';
        out += format_double(pt.mean_value);
        out += ',';
        out += format_double(pt.std_value);
        out += '\n';
    }
    return out;
}

std::vector<TrainResult> train_repetitions(const ProductEnv& env, const LearnConfig& base,
                                           int repetitions) {
    std::vector<TrainResult> results(repetitions);
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(repetitions));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= repetitions) break;
                LearnConfig cfg = base;
                cfg.seed = base.seed + static_cast<std::uint64_t>(i);
                results[i] = train(env, cfg);
            }
        });
    for (auto& t : pool) t.join();
    return results;
}

IndexPolicy complete_index_policy(const ExplicitProduct& p, const ProductEnv& env,
                                  const Policy& pol) {
    IndexPolicy idx = index_policy(p, env, pol);
    for (auto& a : idx)
        if (a < 0) a = 0;  // unvisited states fall back to the first action
    return idx;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    GridSpec grid;
    bool is_grid = false;
    PLMDP model = resolve_model(cfg.model, &grid, &is_grid);
    {
        ValidationReport rep = validate_plmdp(model);
        if (!rep.ok()) throw std::runtime_error("model invalid:\n" + rep.to_string());
    }
    LDGBA automaton = resolve_automaton(cfg.automaton);
    {
        ValidationReport rep = validate_ldgba(automaton);
        if (!rep.ok()) throw std::runtime_error("automaton invalid:\n" + rep.to_string());
    }
    auto bundle = make_env_bundle(std::move(model), automaton, cfg.mode, cfg.reward);
    const ProductEnv& env = *bundle->env;

    auto trains = train_repetitions(env, cfg.learn, cfg.repetitions);

    ExperimentResult res;
    for (auto& t : trains) {
        res.curves.push_back(std::move(t.curve));
        res.episodes_run.push_back(t.episodes_run);
        res.converged.push_back(t.converged ? 1 : 0);
    }
    res.policy = extract_policy(env, trains.front().table);
    res.values = extract_values(trains.front().table);
    res.learned_value_initial = trains.front().table.value(env.initial());

    ExplicitProduct product;
    bool enumerated = false;
    try {
        product = enumerate_product(env, cfg.oracle_cap);
        enumerated = true;
        res.product_states = product.states.size();
    } catch (const std::runtime_error&) {
        // above the cap: learning still stands, the cross-check is skipped
    }

    std::vector<EndComponent> mecs;
    ReachabilityResult reach;
    if (enumerated) {
        mecs = mec_decomposition(product);
        reach = max_satisfaction_probability(product, mecs);
        res.oracle_ran = true;
        res.oracle_max_probability = reach.value[product.initial];
        IndexPolicy idx = complete_index_policy(product, env, res.policy);
        res.learned_policy_probability = policy_satisfaction_probability(product, idx);
    }

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        auto path = [&](const std::string& name) { return (fs::path(cfg.out_dir) / name).string(); };

        for (std::size_t i = 0; i < res.curves.size(); ++i)
            write_text_file(path("rep" + std::to_string(i) + "_curve.csv"),
                            curve_csv(res.curves[i]));
        write_text_file(path("mean_std_curve.csv"), aggregate_csv(aggregate_curves(res.curves)));
        write_json_file(path("policy.json"), policy_to_json(env, res.policy));
        write_json_file(path("values.json"), values_to_json(env, res.values));

        Json summary;
        summary["model"] = cfg.model;
        summary["automaton"] = cfg.automaton;
        summary["mode"] = cfg.mode;
        summary["repetitions"] = cfg.repetitions;
        summary["episodes"] = cfg.learn.episodes;
        summary["tau"] = cfg.learn.tau;
        summary["seed"] = cfg.learn.seed;
        summary["r_f"] = cfg.reward.r_f;
        summary["gamma_f"] = cfg.reward.gamma_f;
        summary["model_states"] = bundle->model.states.size();
        summary["episodes_run"] = res.episodes_run;
        std::vector<bool> conv(res.converged.begin(), res.converged.end());
        summary["converged"] = conv;
        summary["learned_value_initial"] = res.learned_value_initial;
        if (enumerated) summary["product_states"] = res.product_states;
        write_json_file(path("summary.json"), summary);

        if (res.oracle_ran) {
            Json report = oracle_report_json(env, product, mecs, reach);
            report["learned_value_initial"] = res.learned_value_initial;
            report["learned_policy_probability"] = res.learned_policy_probability;
            write_json_file(path("oracle_report.json"), report);
        }
        if (cfg.write_product && enumerated)
            write_json_file(path("product.json"), product_to_json(env, product));
        if (is_grid)
            write_text_file(path("heatmap.csv"),
                            grid_heatmap_csv(bundle->model, grid, bundle->automaton, "eldgba",
                                             cfg.reward, cfg.oracle_cap));
    }
    return res;
}

CompareOutcome compare_modes(const ExperimentConfig& cfg) {
    ExperimentConfig tracking = cfg, baseline = cfg;
    tracking.mode = "eldgba";
    baseline.mode = "ldba-baseline";
    tracking.out_dir.clear();
    baseline.out_dir.clear();

    ExperimentResult a = run_experiment(tracking);
    ExperimentResult b = run_experiment(baseline);

    CompareOutcome out;
    out.tracking = aggregate_curves(a.curves);
    out.baseline = aggregate_curves(b.curves);
    if (!out.tracking.empty()) out.final_mean_tracking = out.tracking.back().mean_reward;
    if (!out.baseline.empty()) out.final_mean_baseline = out.baseline.back().mean_reward;
    out.cross_tracking = crossing_episode(out.tracking);
    out.cross_baseline = crossing_episode(out.baseline);

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        auto path = [&](const std::string& name) { return (fs::path(cfg.out_dir) / name).string(); };
        write_text_file(path("eldgba_mean_std.csv"), aggregate_csv(out.tracking));
        write_text_file(path("ldba_mean_std.csv"), aggregate_csv(out.baseline));
        Json summary;
        summary["model"] = cfg.model;
        summary["automaton"] = cfg.automaton;
        summary["repetitions"] = cfg.repetitions;
        summary["episodes"] = cfg.learn.episodes;
        summary["final_mean_eldgba"] = out.final_mean_tracking;
        summary["final_mean_ldba"] = out.final_mean_baseline;
        summary["half_final_episode_eldgba"] = out.cross_tracking;
        summary["half_final_episode_ldba"] = out.cross_baseline;
        write_json_file(path("compare_summary.json"), summary);
    }
    return out;
}

std::string SimTrace::csv() const {
    std::string out = "step,state,action,reward\n";
    for (std::size_t i = 0; i < state_keys.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += state_keys[i];
        out += ',';
        out += i < actions.size() ? actions[i] : std::string();
        out += ',';
        out += i < rewards.size() ? format_double(rewards[i]) : std::string();
        out += '\n';
    }
    return out;
}

SimTrace simulate_keyed_policy(const ProductEnv& env, const std::map<std::string, std::string>& pol,
                               int steps, Rng& rng) {
    SimTrace trace;
    ProductState x = env.initial();
    trace.state_keys.push_back(env.state_key(x));
    for (int i = 0; i < steps; ++i) {
        if (x.sink) break;
        auto it = pol.find(env.state_key(x));
        if (it == pol.end())
            throw std::runtime_error("policy has no action for state " + env.state_key(x));
        ProductAction u = decode_action(env, it->second);
        ProductStep step = env.step(x, u, rng);
        trace.actions.push_back(it->second);
        trace.rewards.push_back(step.reward);
        x = step.next;
        trace.state_keys.push_back(env.state_key(x));
    }
    return trace;
}

std::string grid_heatmap_csv(const PLMDP& grid_model, const GridSpec& g, const LDGBA& a,
                             const std::string& mode, RewardConfig rcfg, std::size_t cap) {
    std::string out;
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            PLMDP m = grid_model;
            m.initial_state = grid_state(g, r, c);
            // start label: the likeliest label of the cell, first on ties
            const auto& dist = m.labels[m.initial_state];
            PropSet best = dist.front().first;
            double best_p = dist.front().second;
            for (const auto& [mask, p] : dist)
                if (p > best_p) {
                    best = mask;
                    best_p = p;
                }
            m.initial_label = best;
            double value = -1.0;
            try {
                auto bundle = make_env_bundle(std::move(m), a, mode, rcfg);
                ExplicitProduct product = enumerate_product(*bundle->env, cap);
                auto mecs = mec_decomposition(product);
                value = max_satisfaction_probability(product, mecs).value[product.initial];
            } catch (const std::runtime_error&) {
                // cap exceeded: leave the marker value
            }
            out += format_double(value);
            out += c + 1 < g.width ? ',' : '\n';
        }
    }
    return out;
}

}  // namespace ltlsyn
