#include <set>

#include "cvs/harness.hpp"

namespace cvs {

namespace {

using nlohmann::json;

const std::set<std::string> kSharedKeys = {"name", "environment", "episodes", "runs", "seed", "window", "q0",
                                           "algorithm", "alpha", "epsilon", "gamma", "lambda", "n", "cvs_order",
                                           "compare", "title"};
const std::set<std::string> kArmKeys = {"label", "algorithm", "alpha", "epsilon", "gamma", "lambda", "n", "cvs_order", "q0"};
const std::set<std::string> kEnvKeys = {"name", "tree", "low_children", "distance", "criticality", "obstacle_col",
                                        "obstacle_rows", "max_steps", "p_optimal"};

template <class T>
T get_as(const json& doc, const std::string& key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(key, "missing or has the wrong type");
    }
}

std::size_t get_count(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number_integer()) throw ConfigError(key, "must be an integer");
    const auto n = v.get<long long>();
    if (n < 1) throw ConfigError(key, "must be >= 1");
    return static_cast<std::size_t>(n);
}

void reject_unknown(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : doc.items()) {
        if (!allowed.contains(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
}

EnvConfig parse_env(const json& v) {
    EnvConfig env;
    if (v.is_string()) {
        const auto spec = v.get<std::string>();
        const auto colon = spec.find(':');
        env.name = spec.substr(0, colon);
        if (colon != std::string::npos) env.tree = spec.substr(colon + 1);
        return env;
    }
    if (!v.is_object()) throw ConfigError("environment", "must be a string or an object");
    reject_unknown(v, kEnvKeys, "environment");
    if (!v.contains("name")) throw ConfigError("environment.name", "missing");
    env.name = get_as<std::string>(v, "name");
    if (v.contains("tree")) {
        const json& t = v.at("tree");
        if (t.is_string()) {
            env.tree = t.get<std::string>();
        } else {
            try {
                env.tree_spec = roadtree::TreeSpec::from_json(t);
            } catch (const std::invalid_argument& e) {
                throw ConfigError("environment.tree", e.what());
            }
        }
    }
    if (v.contains("low_children")) env.fig6_low_children = get_as<int>(v, "low_children");
    if (v.contains("distance")) env.fig6_distance = get_as<int>(v, "distance");
    if (v.contains("criticality")) env.criticality = get_as<std::string>(v, "criticality");
    if (v.contains("obstacle_col")) env.shooter.obstacle_col = get_as<int>(v, "obstacle_col");
    if (v.contains("obstacle_rows")) {
        const auto rows = get_as<std::vector<int>>(v, "obstacle_rows");
        if (rows.size() != 3) throw ConfigError("environment.obstacle_rows", "must list exactly 3 rows");
        std::copy(rows.begin(), rows.end(), env.shooter.obstacle_rows.begin());
    }
    if (v.contains("max_steps")) {
        const auto steps = get_count(v, "max_steps");
        env.shooter.max_steps = steps;
        env.tennis.max_steps = steps;
    }
    if (v.contains("p_optimal")) env.tennis.p_optimal = get_as<double>(v, "p_optimal");
    return env;
}

// Applies the agent-level keys present in `doc` on top of `cfg`.
void apply_agent_keys(const json& doc, ExperimentConfig& cfg) {
    if (doc.contains("algorithm")) cfg.algorithm = parse_algorithm(get_as<std::string>(doc, "algorithm"));
    if (doc.contains("alpha")) cfg.params.alpha = get_as<double>(doc, "alpha");
    if (doc.contains("epsilon")) cfg.params.epsilon = get_as<double>(doc, "epsilon");
    if (doc.contains("gamma")) cfg.params.gamma = get_as<double>(doc, "gamma");
    if (doc.contains("lambda")) cfg.params.lambda = get_as<double>(doc, "lambda");
    if (doc.contains("n")) cfg.params.n = static_cast<int>(get_count(doc, "n"));
    if (doc.contains("q0")) cfg.q0 = get_as<double>(doc, "q0");
    if (doc.contains("cvs_order")) {
        try {
            cfg.cvs_order = parse_cvs_order(get_as<std::string>(doc, "cvs_order"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("cvs_order", e.what());
        }
    }
}

}  // namespace

Study parse_study(const json& doc) {
    if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    reject_unknown(doc, kSharedKeys, "");

    ExperimentConfig base;
    if (!doc.contains("name")) throw ConfigError("name", "missing");
    base.name = get_as<std::string>(doc, "name");
    if (base.name.empty() || base.name.find_first_of("/\\") != std::string::npos) {
        throw ConfigError("name", "must be a non-empty file-name-safe string");
    }
    if (!doc.contains("environment")) throw ConfigError("environment", "missing");
    base.env = parse_env(doc.at("environment"));
    if (doc.contains("episodes")) base.episodes = get_count(doc, "episodes");
    if (doc.contains("runs")) base.runs = get_count(doc, "runs");
    if (doc.contains("window")) base.window = get_count(doc, "window");
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer()) throw ConfigError("seed", "must be an integer");
        base.seed = doc.at("seed").get<std::uint64_t>();
    }

    Study study;
    study.name = base.name;
    const bool has_compare = doc.contains("compare");
    if (has_compare && doc.contains("algorithm")) throw ConfigError("algorithm", "use either 'algorithm' or 'compare', not both");
    if (!has_compare && !doc.contains("algorithm")) throw ConfigError("algorithm", "missing (or provide a 'compare' list)");
    apply_agent_keys(doc, base);

    if (!has_compare) {
        base.validate();
        make_criticality(base.env, *make_environment(base.env));
        study.arms.push_back({std::string(to_string(base.algorithm)), base});
        return study;
    }

    study.compare = true;
    const json& arms = doc.at("compare");
    if (!arms.is_array() || arms.empty()) throw ConfigError("compare", "must be a non-empty array");
    std::set<std::string> labels;
    for (const auto& arm : arms) {
        if (!arm.is_object()) throw ConfigError("compare", "entries must be objects");
        reject_unknown(arm, kArmKeys, "compare");
        if (!arm.contains("algorithm")) throw ConfigError("compare.algorithm", "missing");
        ExperimentConfig cfg = base;
        apply_agent_keys(arm, cfg);
        const std::string label = arm.contains("label") ? get_as<std::string>(arm, "label") : std::string(to_string(cfg.algorithm));
        if (label.empty() || label.find_first_of("/\\") != std::string::npos) throw ConfigError("compare.label", "must be file-name-safe");
        if (!labels.insert(label).second) throw ConfigError("compare.label", "duplicate label '" + label + "'");
        cfg.validate();
        study.arms.push_back({label, cfg});
    }
    make_criticality(base.env, *make_environment(base.env));
    return study;
}

}  // namespace cvs
