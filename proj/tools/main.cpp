#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "ltlsyn/builtins.hpp"
#include "ltlsyn/experiment.hpp"

namespace {

using namespace ltlsyn;

// Flag values shared by the learn/compare subcommands. Config-file values
// are applied first, explicitly set flags win.
struct LearnFlags {
    std::string config;
    std::string model;
    std::string automaton;
    std::string mode = "eldgba";
    long episodes = 2000;
    int tau = 100;
    double r_f = 0.99;
    double gamma_f = 0.9999;
    std::uint64_t seed = 1;
    int reps = 1;
    double eps_floor = 0.01;
    double alpha_floor = 0.0;
    double q_init = 0.0;
    int window = 50;
    std::string out;
    std::size_t cap = 200000;
    bool write_product = false;
};

void add_learn_flags(CLI::App* cmd, LearnFlags& f, std::map<std::string, CLI::Option*>& opts) {
    opts["config"] = cmd->add_option("--config", f.config, "JSON config; explicit flags override");
    opts["model"] = cmd->add_option("--model", f.model, "builtin model name or model/grid JSON path");
    opts["automaton"] =
        cmd->add_option("--automaton", f.automaton, "builtin automaton name or JSON path");
    opts["mode"] = cmd->add_option("--mode", f.mode,
                                   "eldgba | ldba-baseline | frozen-frontier");
    opts["episodes"] = cmd->add_option("--episodes", f.episodes, "training episodes per repetition");
    opts["tau"] = cmd->add_option("--tau", f.tau, "steps per episode");
    opts["r_f"] = cmd->add_option("--r-f", f.r_f, "accepting-state reward base");
    opts["gamma_f"] = cmd->add_option("--gamma-f", f.gamma_f, "discount at non-accepting states");
    opts["seed"] = cmd->add_option("--seed", f.seed, "seed of repetition 0");
    opts["reps"] = cmd->add_option("--reps", f.reps, "independent repetitions");
    opts["eps_floor"] = cmd->add_option("--eps-floor", f.eps_floor, "exploration floor");
    opts["alpha_floor"] = cmd->add_option("--alpha-floor", f.alpha_floor, "step-size floor");
    opts["q_init"] = cmd->add_option("--q-init", f.q_init, "starting action value (1 explores optimistically)");
    opts["window"] = cmd->add_option("--window", f.window,
                                     "convergence window in episodes, 0 runs every episode");
    opts["out"] = cmd->add_option("--out", f.out, "artifact directory");
    opts["cap"] = cmd->add_option("--oracle-cap", f.cap, "state budget for the oracle cross-check");
    opts["write_product"] =
        cmd->add_flag("--write-product", f.write_product, "export the enumerated product");
}

ExperimentConfig build_config(const LearnFlags& f, const std::map<std::string, CLI::Option*>& opts) {
    ExperimentConfig cfg;
    if (!f.config.empty()) apply_config_json(cfg, read_json_file(f.config));
    auto set = [&](const char* name) { return opts.at(name)->count() > 0; };
    if (set("model") || cfg.model.empty()) cfg.model = f.model;
    if (set("automaton") || cfg.automaton.empty()) cfg.automaton = f.automaton;
    if (set("mode")) cfg.mode = f.mode;
    if (set("episodes")) cfg.learn.episodes = f.episodes;
    if (set("tau")) cfg.learn.tau = f.tau;
    if (set("seed")) cfg.learn.seed = f.seed;
    if (set("eps_floor")) cfg.learn.eps_floor = f.eps_floor;
    if (set("alpha_floor")) cfg.learn.alpha_floor = f.alpha_floor;
    if (set("q_init")) cfg.learn.q_init = f.q_init;
    if (set("window")) cfg.learn.window = f.window;
    if (set("r_f")) cfg.reward.r_f = f.r_f;
    if (set("gamma_f")) cfg.reward.gamma_f = f.gamma_f;
    if (set("reps")) cfg.repetitions = f.reps;
    if (set("out")) cfg.out_dir = f.out;
    if (set("cap")) cfg.oracle_cap = f.cap;
    if (set("write_product")) cfg.write_product = f.write_product;
    if (cfg.model.empty()) throw CLI::ValidationError("--model is required");
    if (cfg.automaton.empty()) throw CLI::ValidationError("--automaton is required");
    return cfg;
}

void run_learn(const ExperimentConfig& cfg) {
    ExperimentResult res = run_experiment(cfg);
    std::cout << "repetitions: " << res.curves.size() << "\n";
    for (std::size_t i = 0; i < res.episodes_run.size(); ++i)
        std::cout << "  rep " << i << ": " << res.episodes_run[i] << " episodes"
                  << (res.converged[i] ? " (converged)" : "") << "\n";
    std::cout << "value at initial state: " << format_double(res.learned_value_initial) << "\n";
    if (res.oracle_ran) {
        std::cout << "product states: " << res.product_states << "\n"
                  << "oracle max probability: " << format_double(res.oracle_max_probability)
                  << "\n"
                  << "learned policy probability: "
                  << format_double(res.learned_policy_probability) << "\n";
    } else {
        std::cout << "oracle cross-check skipped (product above "
                  << cfg.oracle_cap << " states)\n";
    }
    if (!cfg.out_dir.empty()) std::cout << "artifacts in " << cfg.out_dir << "\n";
}

void run_oracle(const std::string& model, const std::string& automaton, const std::string& mode,
                const std::string& out, std::size_t cap, long brute_budget, bool write_product) {
    GridSpec grid;
    bool is_grid = false;
    PLMDP m = resolve_model(model, &grid, &is_grid);
    ValidationReport mrep = validate_plmdp(m);
    if (!mrep.ok()) throw std::runtime_error("model invalid:\n" + mrep.to_string());
    LDGBA a = resolve_automaton(automaton);
    ValidationReport arep = validate_ldgba(a);
    if (!arep.ok()) throw std::runtime_error("automaton invalid:\n" + arep.to_string());

    auto bundle = make_env_bundle(std::move(m), a, mode, RewardConfig{});
    ExplicitProduct product = enumerate_product(*bundle->env, cap);
    auto mecs = mec_decomposition(product);
    auto reach = max_satisfaction_probability(product, mecs);

    std::cout << "product states: " << product.states.size() << "\n";
    int accepting = 0;
    for (const auto& ec : mecs)
        if (classify_mec(ec, product.num_sets) == MecClass::accepting) ++accepting;
    std::cout << "maximal end components: " << mecs.size() << " (" << accepting
              << " accepting)\n";
    std::cout << "max satisfaction probability from start: "
              << format_double(reach.value[product.initial]) << "\n";

    Json report = oracle_report_json(*bundle->env, product, mecs, reach);
    if (brute_budget > 0) {
        BruteForceResult bf = brute_force_deterministic_policies(product, brute_budget);
        std::cout << "deterministic memoryless policies: " << bf.policies_checked
                  << ", best probability " << format_double(bf.best_probability) << "\n";
        report["policies_checked"] = bf.policies_checked;
        report["any_satisfying_policy"] = bf.any_satisfying;
        report["best_policy_probability"] = bf.best_probability;
    }
    if (!out.empty()) {
        std::filesystem::create_directories(out);
        write_json_file((std::filesystem::path(out) / "oracle_report.json").string(), report);
        if (write_product)
            write_json_file((std::filesystem::path(out) / "product.json").string(),
                            product_to_json(*bundle->env, product));
        if (is_grid)
            write_text_file((std::filesystem::path(out) / "heatmap.csv").string(),
                            grid_heatmap_csv(bundle->model, grid, bundle->automaton, mode,
                                             RewardConfig{}, cap));
        std::cout << "artifacts in " << out << "\n";
    }
}

void run_simulate(const std::string& model, const std::string& automaton, const std::string& mode,
                  const std::string& policy_path, int steps, std::uint64_t seed,
                  const std::string& out) {
    PLMDP m = resolve_model(model);
    LDGBA a = resolve_automaton(automaton);
    auto bundle = make_env_bundle(std::move(m), a, mode, RewardConfig{});

    Json doc = read_json_file(policy_path);
    std::map<std::string, std::string> pol;
    for (const auto& [key, value] : doc.items()) pol[key] = value.get<std::string>();

    Rng rng(seed);
    SimTrace trace = simulate_keyed_policy(*bundle->env, pol, steps, rng);
    std::string csv = trace.csv();
    if (out.empty())
        std::cout << csv;
    else {
        write_text_file(out, csv);
        std::cout << "trace with " << trace.actions.size() << " steps written to " << out << "\n";
    }
}

void run_compare(ExperimentConfig cfg) {
    cfg.learn.window = 0;  // fixed-length curves keep the two runs aligned
    CompareOutcome out = compare_modes(cfg);
    std::cout << "final mean reward, eldgba:        " << format_double(out.final_mean_tracking)
              << "\n"
              << "final mean reward, ldba-baseline: " << format_double(out.final_mean_baseline)
              << "\n"
              << "episode reaching half of final, eldgba:        " << out.cross_tracking << "\n"
              << "episode reaching half of final, ldba-baseline: " << out.cross_baseline << "\n";
    if (!cfg.out_dir.empty()) std::cout << "artifacts in " << cfg.out_dir << "\n";
}

void run_export(const std::string& model, const std::string& automaton, const std::string& out) {
    if (model.empty() && automaton.empty())
        throw CLI::ValidationError("export needs --model and/or --automaton");
    std::filesystem::create_directories(out);
    auto path = [&](const std::string& name) {
        return (std::filesystem::path(out) / name).string();
    };
    if (!model.empty()) {
        GridSpec grid;
        bool is_grid = false;
        PLMDP m = resolve_model(model, &grid, &is_grid);
        if (is_grid) write_json_file(path(model + ".grid.json"), grid_to_json(grid));
        write_json_file(path(model + ".model.json"), plmdp_to_json(m));
        std::cout << "wrote " << path(model + ".model.json") << "\n";
    }
    if (!automaton.empty()) {
        LDGBA a = resolve_automaton(automaton);
        write_json_file(path(automaton + ".automaton.json"), ldgba_to_json(a));
        std::cout << "wrote " << path(automaton + ".automaton.json") << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Policy synthesis for LTL tasks on probabilistic labeled MDPs"};
    app.require_subcommand(1);

    LearnFlags lf;
    std::map<std::string, CLI::Option*> lopts;
    CLI::App* learn = app.add_subcommand("learn", "train a policy and cross-check it");
    add_learn_flags(learn, lf, lopts);
    learn->callback([&]() { run_learn(build_config(lf, lopts)); });

    std::string o_model, o_automaton, o_mode = "eldgba", o_out;
    std::size_t o_cap = 200000;
    long o_brute = 0;
    bool o_product = false;
    CLI::App* oracle = app.add_subcommand("oracle", "enumerate the product and model check it");
    oracle->add_option("--model", o_model, "builtin model name or JSON path")->required();
    oracle->add_option("--automaton", o_automaton, "builtin automaton name or JSON path")
        ->required();
    oracle->add_option("--mode", o_mode, "eldgba | ldba-baseline | frozen-frontier");
    oracle->add_option("--out", o_out, "artifact directory");
    oracle->add_option("--cap", o_cap, "enumeration state budget");
    oracle->add_option("--brute-force", o_brute,
                       "also sweep all deterministic memoryless policies up to this count");
    oracle->add_flag("--write-product", o_product, "export the enumerated product");
    oracle->callback(
        [&]() { run_oracle(o_model, o_automaton, o_mode, o_out, o_cap, o_brute, o_product); });

    std::string s_model, s_automaton, s_mode = "eldgba", s_policy, s_out;
    int s_steps = 25;
    std::uint64_t s_seed = 1;
    CLI::App* simulate = app.add_subcommand("simulate", "follow a stored policy and log the trace");
    simulate->add_option("--model", s_model, "builtin model name or JSON path")->required();
    simulate->add_option("--automaton", s_automaton, "builtin automaton name or JSON path")
        ->required();
    simulate->add_option("--mode", s_mode, "eldgba | ldba-baseline | frozen-frontier");
    simulate->add_option("--policy", s_policy, "policy JSON from learn")->required();
    simulate->add_option("--steps", s_steps, "steps to walk");
    simulate->add_option("--seed", s_seed, "sampling seed");
    simulate->add_option("--out", s_out, "trace CSV path (stdout when absent)");
    simulate->callback(
        [&]() { run_simulate(s_model, s_automaton, s_mode, s_policy, s_steps, s_seed, s_out); });

    LearnFlags cf;
    cf.reps = 100;
    cf.episodes = 1000;
    std::map<std::string, CLI::Option*> copts;
    std::string preset;
    CLI::App* compare = app.add_subcommand(
        "compare", "train with and without frontier tracking and aggregate the curves");
    compare->add_option("--preset", preset, "task preset (phi_case2)");
    add_learn_flags(compare, cf, copts);
    compare->callback([&]() {
        if (!preset.empty()) {
            if (preset != "phi_case2")
                throw CLI::ValidationError("unknown preset '" + preset + "'");
            if (copts.at("model")->count() == 0) cf.model = "grid_case2";
            if (copts.at("automaton")->count() == 0) cf.automaton = "phi_case2";
        }
        ExperimentConfig cfg = build_config(cf, copts);
        if (copts.at("reps")->count() == 0 && cfg.repetitions == 1) cfg.repetitions = cf.reps;
        if (copts.at("episodes")->count() == 0) cfg.learn.episodes = cf.episodes;
        run_compare(cfg);
    });

    std::string e_model, e_automaton, e_out = ".";
    CLI::App* exporter = app.add_subcommand("export", "write builtin documents as JSON");
    exporter->add_option("--model", e_model, "builtin model name");
    exporter->add_option("--automaton", e_automaton, "builtin automaton name");
    exporter->add_option("--out", e_out, "output directory");
    exporter->callback([&]() { run_export(e_model, e_automaton, e_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
