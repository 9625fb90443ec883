#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cvs/mdp.hpp"
#include "cvs/q_table.hpp"
#include "cvs/rng.hpp"

namespace cvs {

/// One (state, action) occurrence waiting for its CVS update.
struct WaitEntry {
    StateId state;
    ActionId action;
    double crt_cum = 0.0;     // criticality accumulated since enqueue
    double reward_acc = 0.0;  // sum_{k=1..steps} gamma^(k-1) R_k
    double discount = 1.0;    // gamma^steps
    std::size_t steps = 0;
};

struct TraceStep {
    StateId state;
    ActionId action;
    double reward = 0.0;
};

struct EpisodeLog {
    double ret = 0.0;  // undiscounted
    std::size_t steps = 0;
    std::vector<TraceStep> trace;  // filled only when requested
};

/// Emitted once per value update. `bootstrap` is the state whose Q-value was
/// folded into the target (TERMINAL when the target is a pure return) and
/// `horizon` the number of rewards summed into it.
struct UpdateRecord {
    StateId state;
    ActionId action;
    double target = 0.0;
    StateId bootstrap;
    std::size_t horizon = 0;
};

struct EpisodeOptions {
    bool record_trace = false;
    std::function<void(const UpdateRecord&)> on_update;
};

enum class CvsOrder {
    /// Add h(S') first, then update entries whose total reached 1. The target
    /// is the first state-action at which the accumulated criticality hits 1.
    accumulate_then_check,
    /// Check first, then add h(S'): the target is one step past the critical state.
    literal,
};

CvsOrder parse_cvs_order(std::string_view name);
std::string_view to_string(CvsOrder order);

/// Accumulated criticality counts as having reached 1 within this slack, so
/// that h = 1/n sums reach the threshold after exactly n steps.
inline constexpr double kCriticalityTolerance = 1e-9;

/// Criticality-based varying stepnumber control (one episode, epsilon-greedy).
/// Each visited pair waits in a queue until the criticality of the states
/// that follow it sums to 1, then is updated toward the discounted rewards
/// seen meanwhile plus the discounted Q of the state-action reached at that
/// point. Pairs still waiting at the end are updated toward their return.
/// Throws std::domain_error if h leaves [0, 1].
EpisodeLog cvs_episode(const Environment& env, QTable& q, const CriticalityFn& h, const AgentParams& params, Rng& rng,
                       CvsOrder order = CvsOrder::accumulate_then_check, const EpisodeOptions& opts = {});

/// One-step Q-Learning; target R + gamma * max_a Q(S', a).
EpisodeLog q_learning_episode(const Environment& env, QTable& q, const AgentParams& params, Rng& rng,
                              const EpisodeOptions& opts = {});

/// On-policy n-step SARSA with n = params.n; returns truncated at the episode end.
EpisodeLog n_step_sarsa_episode(const Environment& env, QTable& q, const AgentParams& params, Rng& rng,
                                const EpisodeOptions& opts = {});

/// Per-pair eligibility. Dense storage plus the list of pairs touched this
/// episode, so decay and reset cost O(touched) rather than O(|S||A|).
class EligibilityTraces {
public:
    explicit EligibilityTraces(const QTable& q);

    double get(StateId s, ActionId a) const;
    void bump(StateId s, ActionId a);
    void clear();
    std::size_t active() const noexcept { return active_.size(); }

    /// Applies fn(state, action, trace) to every nonzero trace, then scales
    /// traces by `decay`, dropping those that reach 0.
    template <class Fn>
    void apply_and_decay(double decay, Fn&& fn);

private:
    std::size_t index(StateId s, ActionId a) const;

    struct Pair {
        StateId s;
        ActionId a;
        std::size_t idx;
    };
    std::vector<std::size_t> offsets_;
    std::vector<double> values_;
    std::vector<Pair> active_;
};

/// Watkins's Q(lambda) with accumulating traces. Traces are cut whenever the
/// next action is not greedy.
EpisodeLog watkins_qlambda_episode(const Environment& env, QTable& q, EligibilityTraces& traces, const AgentParams& params,
                                   Rng& rng, const EpisodeOptions& opts = {});

/// Every-visit constant-alpha Monte Carlo control.
EpisodeLog mc_episode(const Environment& env, QTable& q, const AgentParams& params, Rng& rng,
                      const EpisodeOptions& opts = {});

template <class Fn>
void EligibilityTraces::apply_and_decay(double decay, Fn&& fn) {
    std::size_t kept = 0;
    for (std::size_t i = 0; i < active_.size(); ++i) {
        const Pair p = active_[i];
        double& e = values_[p.idx];
        fn(p.s, p.a, e);
        e *= decay;
        if (e != 0.0) active_[kept++] = p;
    }
    active_.resize(kept);
}

}  // namespace cvs
