#include "cvs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace cvs {

Algorithm parse_algorithm(std::string_view name) {
    if (name == "cvs") return Algorithm::cvs;
    if (name == "qlearning") return Algorithm::qlearning;
    if (name == "nstep_sarsa") return Algorithm::nstep_sarsa;
    if (name == "qlambda") return Algorithm::qlambda;
    if (name == "mc") return Algorithm::mc;
    throw ConfigError("algorithm", "unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::cvs: return "cvs";
        case Algorithm::qlearning: return "qlearning";
        case Algorithm::nstep_sarsa: return "nstep_sarsa";
        case Algorithm::qlambda: return "qlambda";
        case Algorithm::mc: return "mc";
    }
    return "?";
}

std::vector<std::string> algorithm_names() { return {"cvs", "qlearning", "nstep_sarsa", "qlambda", "mc"}; }

std::vector<std::string> environment_names() {
    std::vector<std::string> out;
    for (const auto& t : roadtree::builtin_tree_names()) out.push_back("roadtree:" + t);
    out.emplace_back("shooter");
    out.emplace_back("tennis");
    return out;
}

std::unique_ptr<Environment> make_environment(const EnvConfig& cfg) {
    try {
        if (cfg.name == "roadtree") {
            if (cfg.tree_spec) return std::make_unique<roadtree::RoadTreeEnv>(*cfg.tree_spec);
            if (cfg.tree == "fig6") {
                return std::make_unique<roadtree::RoadTreeEnv>(roadtree::fig6_tree(cfg.fig6_low_children, cfg.fig6_distance));
            }
            return std::make_unique<roadtree::RoadTreeEnv>(roadtree::builtin_tree(cfg.tree));
        }
        if (cfg.name == "shooter") return std::make_unique<shooter::ShooterEnv>(cfg.shooter);
        if (cfg.name == "tennis") return std::make_unique<tennis::TennisEnv>(cfg.tennis);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError("environment", e.what());
    }
    throw ConfigError("environment", "unknown environment '" + cfg.name + "'");
}

CriticalityFn make_criticality(const EnvConfig& cfg, const Environment& env) {
    if (cfg.criticality == "natural") return env.criticality();
    constexpr std::string_view prefix = "constant:";
    if (cfg.criticality.starts_with(prefix)) {
        const std::string_view num = std::string_view(cfg.criticality).substr(prefix.size());
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
        if (ec == std::errc() && ptr == num.data() + num.size() && v >= 0.0 && v <= 1.0) return CriticalityFn::constant(v);
    }
    throw ConfigError("environment.criticality", "expected 'natural' or 'constant:<value in [0,1]>', got '" + cfg.criticality + "'");
}

void ExperimentConfig::validate() const {
    if (episodes < 1) throw ConfigError("episodes", "must be >= 1");
    if (runs < 1) throw ConfigError("runs", "must be >= 1");
    if (window < 1) throw ConfigError("window", "must be >= 1");
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        throw ConfigError(msg.substr(0, msg.find(' ')), msg);
    }
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t run_index) { return derive_seed(seed, run_index); }

RunResult run_single(const ExperimentConfig& cfg, std::size_t run_index) {
    cfg.validate();
    const auto env = make_environment(cfg.env);
    const CriticalityFn h = make_criticality(cfg.env, *env);

    RunResult result;
    result.seed = run_seed(cfg.seed, run_index);
    result.returns.reserve(cfg.episodes);

    const auto* tree = dynamic_cast<const roadtree::RoadTreeEnv*>(env.get());
    if (tree) {
        result.oracle_return = roadtree::optimal_return_oracle(*tree).best_return;
        result.greedy_optimal.reserve(cfg.episodes);
    }

    Rng rng(result.seed);
    QTable q(*env, cfg.q0);
    std::optional<EligibilityTraces> traces;
    if (cfg.algorithm == Algorithm::qlambda) traces.emplace(q);

    for (std::size_t e = 0; e < cfg.episodes; ++e) {
        EpisodeLog log;
        switch (cfg.algorithm) {
            case Algorithm::cvs: log = cvs_episode(*env, q, h, cfg.params, rng, cfg.cvs_order); break;
            case Algorithm::qlearning: log = q_learning_episode(*env, q, cfg.params, rng); break;
            case Algorithm::nstep_sarsa: log = n_step_sarsa_episode(*env, q, cfg.params, rng); break;
            case Algorithm::qlambda: log = watkins_qlambda_episode(*env, q, *traces, cfg.params, rng); break;
            case Algorithm::mc: log = mc_episode(*env, q, cfg.params, rng); break;
        }
        result.returns.push_back(log.ret);
        if (tree) {
            result.greedy_optimal.push_back(roadtree::worst_greedy_return(*tree, q) == *result.oracle_return ? 1 : 0);
        }
    }
    return result;
}

std::size_t default_thread_count() {
    if (const char* v = std::getenv("CVS_LAB_THREADS")) {
        std::size_t n = 0;
        const std::string_view s(v);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec == std::errc() && ptr == s.data() + s.size() && n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, std::size_t threads) {
    cfg.validate();
    make_environment(cfg.env);  // surface config errors before spawning workers

    std::vector<RunResult> results(cfg.runs);
    const std::size_t workers = std::min(cfg.runs, threads == 0 ? default_thread_count() : threads);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto work = [&] {
        for (std::size_t i = next++; i < cfg.runs; i = next++) {
            try {
                results[i] = run_single(cfg, i);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::vector<double> running_average(const std::vector<double>& series, std::size_t window) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t begin = i + 1 >= window ? i + 1 - window : 0;
        // Summed per window rather than as a sliding total so results do not drift.
        double sum = 0.0;
        for (std::size_t j = begin; j <= i; ++j) sum += series[j];
        out[i] = sum / static_cast<double>(i - begin + 1);
    }
    return out;
}

std::vector<double> average_series(const std::vector<std::vector<double>>& series) {
    if (series.empty()) return {};
    const std::size_t len = series.front().size();
    std::vector<double> out(len, 0.0);
    for (const auto& s : series) {
        if (s.size() != len) throw std::invalid_argument("average_over_runs: series lengths differ");
        for (std::size_t i = 0; i < len; ++i) out[i] += s[i];
    }
    for (double& v : out) v /= static_cast<double>(series.size());
    return out;
}

std::vector<double> average_over_runs(const std::vector<RunResult>& results) {
    std::vector<std::vector<double>> series;
    series.reserve(results.size());
    for (const auto& r : results) series.push_back(r.returns);
    return average_series(series);
}

std::optional<std::size_t> episodes_to_threshold(const std::vector<double>& curve, double threshold) {
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve[i] >= threshold) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> episodes_to_oracle_greedy(const RunResult& r) {
    for (std::size_t i = 0; i < r.greedy_optimal.size(); ++i) {
        if (r.greedy_optimal[i]) return i;
    }
    return std::nullopt;
}

}  // namespace cvs
