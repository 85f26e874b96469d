#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ltlsyn/io.hpp"

namespace ltlsyn {

/**
 * Owns a model, the automaton actually used (possibly degeneralized), and
 * the product environment viewing both. Heap-held so the env's internal
 * pointers stay valid; create through make_env_bundle.
 */
struct EnvBundle {
    PLMDP model;
    LDGBA automaton;
    std::unique_ptr<ProductEnv> env;
};

/**
 * mode selects the pipeline: "eldgba" tracks the pending accepting sets,
 * "ldba-baseline" degeneralizes the automaton to a single set first, and
 * "frozen-frontier" runs the conventional product without tracking.
 * Throws std::invalid_argument on anything else.
 */
std::unique_ptr<EnvBundle> make_env_bundle(PLMDP model, LDGBA automaton,
                                           const std::string& mode, RewardConfig rcfg,
                                           ResetMode rmode = ResetMode::immediate);

/** Builtin name or path to a model/grid document. Reports grid geometry
 * when there is one. */
PLMDP resolve_model(const std::string& name_or_path, GridSpec* grid_out = nullptr,
                    bool* is_grid = nullptr);

/** Builtin name or path to an automaton document. */
LDGBA resolve_automaton(const std::string& name_or_path);

struct ExperimentConfig {
    std::string model;      // builtin name or file path
    std::string automaton;  // builtin name or file path
    std::string mode = "eldgba";
    LearnConfig learn;
    RewardConfig reward;
    int repetitions = 1;
    std::string out_dir;             // empty: no files, results only
    std::size_t oracle_cap = 200'000;  // skip the oracle above this many states
    bool write_product = false;
};

/** Fills cfg from a JSON document; unknown keys are rejected. */
void apply_config_json(ExperimentConfig& cfg, const Json& doc);

struct AggregatePoint {
    long episode = 0;
    double mean_reward = 0.0;
    double std_reward = 0.0;
    double mean_value = 0.0;
    double std_value = 0.0;
};

/** Per-episode mean and population standard deviation across repetitions,
 * up to the shortest curve. */
std::vector<AggregatePoint> aggregate_curves(const std::vector<std::vector<CurvePoint>>& curves);

/** First episode whose mean reward reaches half of the final mean, -1 if
 * the curve never does (final <= 0). */
long crossing_episode(const std::vector<AggregatePoint>& agg);

struct ExperimentResult {
    std::vector<std::vector<CurvePoint>> curves;  // per repetition
    std::vector<long> episodes_run;
    std::vector<char> converged;
    Policy policy;      // greedy policy of repetition 0
    ValueMap values;    // state values of repetition 0
    std::size_t product_states = 0;  // 0 when enumeration was skipped
    bool oracle_ran = false;
    double oracle_max_probability = -1.0;
    double learned_policy_probability = -1.0;
    double learned_value_initial = 0.0;
};

/**
 * Trains `repetitions` independent runs (seeds cfg.learn.seed + i) in
 * parallel, writes curve/policy/value artifacts plus an oracle cross-check
 * when the product is small enough to enumerate. Artifacts depend only on
 * the config and seed, never on timing.
 */
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct CompareOutcome {
    std::vector<AggregatePoint> tracking;
    std::vector<AggregatePoint> baseline;
    double final_mean_tracking = 0.0;
    double final_mean_baseline = 0.0;
    long cross_tracking = -1;
    long cross_baseline = -1;
};

/**
 * Runs cfg once in eldgba mode and once in ldba-baseline mode (shared model,
 * automaton, learning settings) and aggregates both. Writes the two mean/std
 * CSVs and a summary JSON when cfg.out_dir is set.
 */
CompareOutcome compare_modes(const ExperimentConfig& cfg);

struct SimTrace {
    std::vector<std::string> state_keys;  // visited states, initial first
    std::vector<std::string> actions;     // one per step taken
    std::vector<double> rewards;
    std::string csv() const;
};

/**
 * Walks the environment following a policy keyed by canonical state
 * encoding. Throws std::runtime_error when the policy has no entry for a
 * state that is reached. Stops early in the absorbing sink.
 */
SimTrace simulate_keyed_policy(const ProductEnv& env, const std::map<std::string, std::string>& pol,
                               int steps, Rng& rng);

/**
 * Maximum satisfaction probability when the run starts at each cell of the
 * grid, as a width-columned CSV (row-major). Cells whose product exceeds
 * the cap come out as -1.
 */
std::string grid_heatmap_csv(const PLMDP& grid_model, const GridSpec& g, const LDGBA& a,
                             const std::string& mode, RewardConfig rcfg,
                             std::size_t cap = 200'000);

}  // namespace ltlsyn
