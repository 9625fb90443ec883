// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cvs/agents.hpp"
#include "cvs/cli.hpp"
#include "cvs/harness.hpp"
#include "cvs/road_tree.hpp"
#include "cvs/shooter.hpp"
#include "cvs/tennis.hpp"

using namespace cvs;
namespace fs = std::filesystem;

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? " ok" : " FAILED");
        pass = pass && ok;
    }
};

std::string fmt(double v) {
    if (std::isinf(v)) return "never";
    std::ostringstream os;
    os << v;
    return os.str();
}

// Runs that never reach the goal count as infinitely late.
double as_count(std::optional<std::size_t> v) { return v ? static_cast<double>(*v) : kNever; }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    const double lo = v[n / 2 - 1], hi = v[n / 2];
    return std::isinf(hi) ? hi : (lo + hi) / 2.0;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

ExperimentConfig tree_config(const std::string& tree, Algorithm algo, std::size_t episodes, std::size_t runs,
                             std::uint64_t seed, std::size_t window) {
    ExperimentConfig cfg;
    cfg.name = tree;
    cfg.env.name = "roadtree";
    cfg.env.tree = tree;
    cfg.algorithm = algo;
    cfg.params.alpha = 0.1;
    cfg.params.epsilon = 0.1;
    cfg.params.gamma = 1.0;
    cfg.params.lambda = 0.9;
    cfg.episodes = episodes;
    cfg.runs = runs;
    cfg.seed = seed;
    cfg.window = window;
    return cfg;
}

// ---- 1 ------------------------------------------------------------------

struct UpdateLog {
    std::vector<UpdateRecord> v;
    EpisodeOptions opts() {
        EpisodeOptions o;
        o.on_update = [this](const UpdateRecord& r) { v.push_back(r); };
        return o;
    }
};

bool same_updates(const std::vector<UpdateRecord>& a, const std::vector<UpdateRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].state != b[i].state || a[i].action != b[i].action || !same_bits(a[i].target, b[i].target)) return false;
    }
    return true;
}

template <class Lhs, class Rhs>
bool lockstep(const Environment& env, std::uint64_t seed, int episodes, Lhs lhs, Rhs rhs) {
    QTable qa(env, 0.0), qb(env, 0.0);
    Rng ra(seed), rb(seed);
    for (int e = 0; e < episodes; ++e) {
        UpdateLog la, lb;
        lhs(qa, ra, la.opts());
        rhs(qb, rb, lb.opts());
        if (!(qa == qb) || !same_updates(la.v, lb.v)) return false;
    }
    return true;
}

Outcome criterion_equivalence() {
    Outcome out;
    const roadtree::RoadTreeEnv tree(roadtree::fig3_tree());
    const shooter::ShooterEnv shoot;
    AgentParams p;
    p.alpha = 0.1;
    p.epsilon = 0.1;
    p.gamma = 1.0;

    auto check_n = [&](const Environment& env, int n, int episodes, std::uint64_t seed) {
        AgentParams pn = p;
        pn.n = n;
        const auto h = CriticalityFn::constant(1.0 / n);
        return lockstep(
            env, seed, episodes,
            [&](QTable& q, Rng& r, const EpisodeOptions& o) { cvs_episode(env, q, h, pn, r, CvsOrder::accumulate_then_check, o); },
            [&](QTable& q, Rng& r, const EpisodeOptions& o) { n_step_sarsa_episode(env, q, pn, r, o); });
    };

    bool a = true, b = true, c = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        a = a && check_n(tree, 1, 200, seed) && check_n(shoot, 1, 300, seed);
        b = b && check_n(tree, 3, 200, seed) && check_n(shoot, 3, 300, seed);
        const auto h0 = CriticalityFn::constant(0.0);
        c = c && lockstep(
                     tree, seed, 200,
                     [&](QTable& q, Rng& r, const EpisodeOptions& o) { cvs_episode(tree, q, h0, p, r, CvsOrder::accumulate_then_check, o); },
                     [&](QTable& q, Rng& r, const EpisodeOptions& o) { mc_episode(tree, q, p, r, o); });
    }
    out.require(a, "h=1 vs SARSA(1)");
    out.require(b, "h=1/3 vs 3-step SARSA");
    out.require(c, "h=0 vs every-visit MC");
    return out;
}

// ---- 2 ------------------------------------------------------------------

Outcome criterion_fig2() {
    Outcome out;
    const auto cvs_runs = run_experiment(tree_config("fig1", Algorithm::cvs, 1000, 10, 2, 100));
    const auto ql_runs = run_experiment(tree_config("fig1", Algorithm::qlearning, 20000, 10, 2, 100));

    int cvs_fast = 0;
    std::string firsts;
    for (const auto& r : cvs_runs) {
        const double first = as_count(episodes_to_oracle_greedy(r));
        firsts += (firsts.empty() ? "" : " ") + fmt(first);
        cvs_fast += first < 50;  // greedy optimal after at most 50 episodes
    }
    int ql_not_at_1000 = 0, ql_at_20000 = 0;
    for (const auto& r : ql_runs) {
        ql_not_at_1000 += r.greedy_optimal[999] == 0;
        ql_at_20000 += r.greedy_optimal[19999] != 0;
    }
    out.require(cvs_fast >= 9, "CVS oracle-greedy within 50 episodes in " + std::to_string(cvs_fast) + "/10 (first hits " +
                                   firsts + ")");
    out.require(ql_not_at_1000 >= 9, "Q-Learning not optimal at 1000 in " + std::to_string(ql_not_at_1000) + "/10");
    out.require(ql_at_20000 >= 8, "Q-Learning optimal at 20000 in " + std::to_string(ql_at_20000) + "/10");
    return out;
}

// ---- 3 ------------------------------------------------------------------

Outcome criterion_fig3() {
    Outcome out;
    std::vector<double> cvs_first, ql_first;
    for (const auto& r : run_experiment(tree_config("fig3", Algorithm::cvs, 200, 20, 3, 10))) {
        cvs_first.push_back(as_count(episodes_to_oracle_greedy(r)));
    }
    for (const auto& r : run_experiment(tree_config("fig3", Algorithm::qlambda, 200, 20, 3, 10))) {
        ql_first.push_back(as_count(episodes_to_oracle_greedy(r)));
    }
    const double mc = median(cvs_first), mq = median(ql_first);
    out.require(mc <= 10, "CVS median " + fmt(mc) + " <= 10");
    out.require(mq >= 2 * mc, "Q(lambda) median " + fmt(mq) + " >= 2x CVS");
    out.require(mq >= 10 && mq <= 400, "Q(lambda) median in [10, 400]");
    return out;
}

// ---- 4 ------------------------------------------------------------------

Outcome criterion_fig4() {
    Outcome out;
    const auto c = running_average(average_over_runs(run_experiment(tree_config("fig4", Algorithm::cvs, 200, 20, 4, 20))), 20);
    const auto q =
        running_average(average_over_runs(run_experiment(tree_config("fig4", Algorithm::qlambda, 200, 20, 4, 20))), 20);
    out.require(c.back() > q.back(), "CVS final " + fmt(c.back()) + " > Q(lambda) final " + fmt(q.back()));
    out.require(c.back() >= 1.5, "CVS final >= 1.5");
    return out;
}

// ---- 5 ------------------------------------------------------------------

Outcome criterion_fig6() {
    Outcome out;
    const auto cvs_runs = run_experiment(tree_config("fig6", Algorithm::cvs, 300, 10, 6, 10));
    const auto mc_runs = run_experiment(tree_config("fig6", Algorithm::mc, 300, 10, 6, 10));
    const auto c = running_average(average_over_runs(cvs_runs), 10);
    const auto m = running_average(average_over_runs(mc_runs), 10);
    double cs = 0, ms = 0;
    for (std::size_t i = 150; i < 300; ++i) {
        cs += c[i];
        ms += m[i];
    }
    cs /= 150;
    ms /= 150;
    out.require(cs - ms >= 0.5, "late-window CVS " + fmt(cs) + " - MC " + fmt(ms) + " >= 0.5");

    // The oracle return 2 is only reachable along the oracle path.
    int hit = 0;
    for (const auto& r : cvs_runs) {
        const double best = *r.oracle_return;
        hit += std::any_of(r.returns.begin(), r.returns.begin() + 150, [&](double g) { return g == best; });
    }
    out.require(hit >= 8, "CVS executed the oracle path within 150 episodes in " + std::to_string(hit) + "/10");
    return out;
}

// ---- 6 ------------------------------------------------------------------

Outcome criterion_shooter() {
    Outcome out;
    auto cfg = [](Algorithm algo) {
        ExperimentConfig c;
        c.name = "shooter";
        c.env.name = "shooter";
        c.algorithm = algo;
        c.params.alpha = 0.1;
        c.params.epsilon = 0.1;
        c.params.gamma = 1.0;
        c.episodes = 3000;
        c.runs = 10;
        c.seed = 7;
        c.window = 100;
        return c;
    };
    const auto cvs_runs = run_experiment(cfg(Algorithm::cvs));
    const auto ql_runs = run_experiment(cfg(Algorithm::qlearning));
    std::vector<double> cvs_t, ql_t;
    for (const auto& r : cvs_runs) cvs_t.push_back(as_count(episodes_to_threshold(running_average(r.returns, 100), 0.0)));
    for (const auto& r : ql_runs) ql_t.push_back(as_count(episodes_to_threshold(running_average(r.returns, 100), 0.0)));
    const double mc = median(cvs_t), mq = median(ql_t);
    out.require(mc <= 600, "CVS median episodes to 0.0 " + fmt(mc) + " <= 600");
    out.require(mq >= 2 * mc, "Q-Learning median " + fmt(mq) + " >= 2x CVS");
    const auto mean = running_average(average_over_runs(cvs_runs), 100);
    const auto reach = episodes_to_threshold(std::vector<double>(mean.begin(), mean.begin() + 2000), 0.25);
    out.require(reach.has_value(), "CVS smoothed score reaches 0.25 within 2000 (at " + fmt(as_count(reach)) + ")");
    return out;
}

// ---- 7 ------------------------------------------------------------------

Outcome criterion_tennis() {
    Outcome out;
    const tennis::TennisEnv env;
    const auto h = env.criticality();
    Rng rng(8);
    bool bounds = true, rewards = true, crit = true;
    tennis::TennisState s = env.reset_state(rng);
    std::size_t optimal = 0, opp_draws = 0;
    for (int i = 0; i < 100000; ++i) {
        const StateId id = tennis::TennisEnv::encode_state(s);
        crit = crit && h(id) == (s.ball.h_dir == -1 ? 1.0 : 0.0);
        const auto opp = env.sample_opponent_action(s, rng);
        optimal += opp == tennis::opponent_optimal_action(s);
        ++opp_draws;
        const auto a = static_cast<tennis::Action>(rng.uniform_index(tennis::kNumActions));
        const auto o = env.advance_with(s, a, opp);
        if (o.terminal) {
            rewards = rewards && (o.reward == 1.0 || o.reward == -1.0);
            s = env.reset_state(rng);
            continue;
        }
        rewards = rewards && o.reward == 0.0;
        const auto& b = o.next.ball;
        bounds = bounds && b.row >= 0 && b.row < tennis::kRows && b.col >= 0 && b.col < tennis::kCols &&
                 o.next.agent_row >= 0 && o.next.agent_row < tennis::kRows && o.next.opponent_row >= 0 &&
                 o.next.opponent_row < tennis::kRows;
        s = o.next;
    }
    const double freq = static_cast<double>(optimal) / static_cast<double>(opp_draws);
    out.require(bounds, "ball and rackets in bounds");
    out.require(rewards, "rewards only on terminals");
    out.require(std::abs(freq - (0.8 + 0.2 / 3.0)) <= 0.02, "opponent optimal frequency " + fmt(freq));
    out.require(crit, "criticality = 1 iff h_dir = -1");
    return out;
}

// ---- 8 ------------------------------------------------------------------

Outcome criterion_oracle() {
    Outcome out;
    const std::vector<std::pair<const char*, double>> expected = {{"fig1", 7}, {"fig3", 2}, {"fig4", 2}, {"fig6", 2}};
    for (const auto& [name, value] : expected) {
        const double got = roadtree::optimal_return_oracle(roadtree::RoadTreeEnv(roadtree::builtin_tree(name))).best_return;
        out.require(got == value, std::string(name) + " = " + fmt(got));
    }
    return out;
}

// ---- 9 ------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion_determinism() {
    Outcome out;
    const fs::path root = fs::temp_directory_path() / ("cvs_lab_acceptance_" + std::to_string(::getpid()));
    for (const auto& preset : cli::presets()) {
        const fs::path a = root / (preset.name + "_a"), b = root / (preset.name + "_b");
        std::ostringstream sink;
        const int ra = cli::cmd_run(preset.name, a, std::nullopt, sink, sink);
        const int rb = cli::cmd_run(preset.name, b, std::nullopt, sink, sink);
        bool same = ra == 0 && rb == 0;
        std::size_t files = 0;
        if (same) {
            for (const auto& entry : fs::directory_iterator(a)) {
                if (entry.path().extension() != ".csv") continue;
                ++files;
                same = same && slurp(entry.path()) == slurp(b / entry.path().filename());
            }
        }
        out.require(same && files > 0, preset.name);
    }
    fs::remove_all(root);
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    const Criterion criteria[] = {
        {1, "equivalence suite", criterion_equivalence},
        {2, "distant-leaf tree: CVS vs Q-Learning", criterion_fig2},
        {3, "two-branch tree: CVS vs Q(lambda)", criterion_fig3},
        {4, "equal-distance tree: CVS vs Q(lambda)", criterion_fig4},
        {5, "hidden-optimum tree: CVS vs MC", criterion_fig6},
        {6, "shooter: CVS vs Q-Learning", criterion_shooter},
        {7, "tennis dynamics", criterion_tennis},
        {8, "oracle consistency", criterion_oracle},
        {9, "preset determinism", criterion_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const Outcome o = c.fn();
        std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
