#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cvs/agents.hpp"
#include "cvs/mdp.hpp"
#include "cvs/road_tree.hpp"
#include "cvs/shooter.hpp"
#include "cvs/tennis.hpp"

namespace cvs {

/// Invalid experiment description. `key()` names the offending config key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class Algorithm { cvs, qlearning, nstep_sarsa, qlambda, mc };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a);
std::vector<std::string> algorithm_names();

struct EnvConfig {
    std::string name = "roadtree";  // roadtree | shooter | tennis
    std::string tree = "fig3";      // built-in tree when tree_spec is empty
    std::optional<roadtree::TreeSpec> tree_spec;
    int fig6_low_children = 10;
    int fig6_distance = 10;
    shooter::ShooterConfig shooter;
    tennis::TennisConfig tennis;
    /// "natural" (the environment's own h) or "constant:<value>".
    std::string criticality = "natural";
};

std::unique_ptr<Environment> make_environment(const EnvConfig& cfg);
CriticalityFn make_criticality(const EnvConfig& cfg, const Environment& env);
/// Environment names accepted in configs, e.g. "roadtree:fig1", "shooter".
std::vector<std::string> environment_names();

struct ExperimentConfig {
    std::string name = "experiment";
    EnvConfig env;
    Algorithm algorithm = Algorithm::cvs;
    AgentParams params;
    double q0 = 0.0;
    std::size_t episodes = 200;
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::size_t window = 10;
    CvsOrder cvs_order = CvsOrder::accumulate_then_check;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::vector<double> returns;
    /// Road-Tree only: whether every greedy path was oracle-optimal after each episode.
    std::vector<std::uint8_t> greedy_optimal;
    std::optional<double> oracle_return;
};

/// Seed of run `run_index` within an experiment seeded with `seed`.
std::uint64_t run_seed(std::uint64_t seed, std::size_t run_index);

/// One run: fresh environment, fresh Q-table, cfg.episodes episodes.
RunResult run_single(const ExperimentConfig& cfg, std::size_t run_index);

/// cfg.runs independent runs, indexed by run. `threads` = 0 uses default_thread_count().
std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, std::size_t threads = 0);

/// CVS_LAB_THREADS if set to a positive integer, else the hardware concurrency.
std::size_t default_thread_count();

/// output[i] = mean(series[max(0, i - window + 1) .. i]).
std::vector<double> running_average(const std::vector<double>& series, std::size_t window);

/// Element-wise mean of the return series. Throws std::invalid_argument on length mismatch.
std::vector<double> average_over_runs(const std::vector<RunResult>& results);
std::vector<double> average_series(const std::vector<std::vector<double>>& series);

/// First index with curve[i] >= threshold.
std::optional<std::size_t> episodes_to_threshold(const std::vector<double>& curve, double threshold);

/// First episode index after which the greedy policy was oracle-optimal.
std::optional<std::size_t> episodes_to_oracle_greedy(const RunResult& r);

/// A named set of experiments sharing one environment, one per compared algorithm.
struct Study {
    std::string name;
    struct Arm {
        std::string label;
        ExperimentConfig config;
    };
    std::vector<Arm> arms;
    bool compare = false;
};

/// Parses a config document. Single-experiment documents carry "algorithm";
/// comparison documents carry a "compare" array whose entries override the
/// shared keys. Unknown keys are rejected. Throws ConfigError.
Study parse_study(const nlohmann::json& doc);

}  // namespace cvs
