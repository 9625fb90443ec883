#include "cvs/agents.hpp"

#include <algorithm>
#include <stdexcept>

namespace cvs {

namespace {

void emit(const EpisodeOptions& opts, const UpdateRecord& r) {
    if (opts.on_update) opts.on_update(r);
}

void log_step(EpisodeLog& log, const EpisodeOptions& opts, StateId s, ActionId a, double reward) {
    log.ret += reward;
    ++log.steps;
    if (opts.record_trace) log.trace.push_back({s, a, reward});
}

double checked_criticality(const CriticalityFn& h, StateId s) {
    const double v = h(s);
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error("criticality " + std::to_string(v) + " outside [0, 1] at state " + std::to_string(s.value));
    }
    return v;
}

bool contains(const std::vector<ActionId>& v, ActionId a) { return std::find(v.begin(), v.end(), a) != v.end(); }

}  // namespace

CvsOrder parse_cvs_order(std::string_view name) {
    if (name == "default" || name == "accumulate_then_check") return CvsOrder::accumulate_then_check;
    if (name == "literal" || name == "check_then_accumulate") return CvsOrder::literal;
    throw std::invalid_argument("unknown cvs_order '" + std::string(name) + "' (expected default or literal)");
}

std::string_view to_string(CvsOrder order) {
    return order == CvsOrder::literal ? "literal" : "default";
}

EpisodeLog cvs_episode(const Environment& env, QTable& q, const CriticalityFn& h, const AgentParams& params, Rng& rng,
                       CvsOrder order, const EpisodeOptions& opts) {
    params.validate();
    if (q.num_states() != env.num_states()) throw std::invalid_argument("Q-table does not match the environment");
    constexpr double threshold = 1.0 - kCriticalityTolerance;

    EpisodeLog log;
    std::vector<WaitEntry> wait;
    Episode ep(env, rng);
    StateId s = ep.state();
    ActionId a = epsilon_greedy(q, s, params.epsilon, rng);

    while (true) {
        wait.push_back(WaitEntry{s, a});
        const Transition t = ep.step(a);
        log_step(log, opts, s, a, t.reward);
        const StateId next = t.next_state;
        ActionId next_action{};
        if (!t.terminal) next_action = epsilon_greedy(q, next, params.epsilon, rng);
        const double crit = checked_criticality(h, next);

        for (auto& w : wait) {
            w.reward_acc += w.discount * t.reward;
            w.discount *= params.gamma;
            ++w.steps;
        }

        auto update = [&](const WaitEntry& w) {
            const double target = t.terminal ? w.reward_acc : w.reward_acc + w.discount * q.value(next, next_action);
            q_update(q, w.state, w.action, target, params.alpha);
            emit(opts, {w.state, w.action, target, t.terminal ? env.terminal_state() : next, w.steps});
        };

        std::size_t kept = 0;
        for (std::size_t i = 0; i < wait.size(); ++i) {
            WaitEntry& w = wait[i];
            if (order == CvsOrder::accumulate_then_check) w.crt_cum += crit;
            if (w.crt_cum >= threshold) {
                update(w);
                continue;
            }
            if (order == CvsOrder::literal) w.crt_cum += crit;
            wait[kept++] = w;
        }
        wait.resize(kept);

        if (t.terminal) {
            for (const auto& w : wait) update(w);
            break;
        }
        s = next;
        a = next_action;
    }
    return log;
}

EpisodeLog q_learning_episode(const Environment& env, QTable& q, const AgentParams& params, Rng& rng,
                              const EpisodeOptions& opts) {
    params.validate();
    EpisodeLog log;
    Episode ep(env, rng);
    StateId s = ep.state();
    ActionId a = epsilon_greedy(q, s, params.epsilon, rng);
    while (true) {
        const Transition t = ep.step(a);
        log_step(log, opts, s, a, t.reward);
        ActionId next_action{};
        if (!t.terminal) next_action = epsilon_greedy(q, t.next_state, params.epsilon, rng);
        const double target = t.terminal ? t.reward : t.reward + params.gamma * q.max_value(t.next_state);
        q_update(q, s, a, target, params.alpha);
        emit(opts, {s, a, target, t.next_state, 1});
        if (t.terminal) break;
        s = t.next_state;
        a = next_action;
    }
    return log;
}

EpisodeLog n_step_sarsa_episode(const Environment& env, QTable& q, const AgentParams& params, Rng& rng,
                                const EpisodeOptions& opts) {
    params.validate();
    const auto n = static_cast<std::size_t>(params.n);
    EpisodeLog log;
    // states[t], actions[t] for t < T; rewards[t] is R_{t+1}.
    std::vector<StateId> states;
    std::vector<ActionId> actions;
    std::vector<double> rewards;

    auto update = [&](std::size_t tau, std::size_t end, bool bootstrap) {
        double g = 0.0;
        double d = 1.0;
        for (std::size_t i = tau; i < end; ++i) {
            g += d * rewards[i];
            d *= params.gamma;
        }
        if (bootstrap) g = g + d * q.value(states[end], actions[end]);
        q_update(q, states[tau], actions[tau], g, params.alpha);
        emit(opts, {states[tau], actions[tau], g, bootstrap ? states[end] : env.terminal_state(), end - tau});
    };

    Episode ep(env, rng);
    states.push_back(ep.state());
    actions.push_back(epsilon_greedy(q, states.back(), params.epsilon, rng));
    std::size_t next_tau = 0;
    while (true) {
        const std::size_t t = states.size() - 1;
        const Transition tr = ep.step(actions[t]);
        log_step(log, opts, states[t], actions[t], tr.reward);
        rewards.push_back(tr.reward);
        if (tr.terminal) break;
        states.push_back(tr.next_state);
        actions.push_back(epsilon_greedy(q, tr.next_state, params.epsilon, rng));
        // After observing S_{t+1} and choosing A_{t+1}, the pair from t+1-n has its full n-step return.
        if (t + 1 >= n) {
            update(next_tau, next_tau + n, true);
            ++next_tau;
        }
    }
    const std::size_t episode_len = rewards.size();
    for (; next_tau < episode_len; ++next_tau) update(next_tau, episode_len, false);
    return log;
}

EligibilityTraces::EligibilityTraces(const QTable& q) {
    offsets_.resize(q.num_states() + 1, 0);
    for (std::uint32_t s = 0; s < q.num_states(); ++s) {
        const StateId id{s};
        offsets_[s + 1] = offsets_[s] + (id == q.terminal_state() ? 0 : q.num_actions(id));
    }
    values_.assign(offsets_.back(), 0.0);
}

std::size_t EligibilityTraces::index(StateId s, ActionId a) const {
    const std::size_t begin = offsets_.at(s.value);
    if (a.value >= offsets_.at(s.value + 1) - begin) throw ContractError("trace action index out of range");
    return begin + a.value;
}

double EligibilityTraces::get(StateId s, ActionId a) const { return values_[index(s, a)]; }

void EligibilityTraces::bump(StateId s, ActionId a) {
    const std::size_t idx = index(s, a);
    if (values_[idx] == 0.0) active_.push_back({s, a, idx});
    values_[idx] += 1.0;
}

void EligibilityTraces::clear() {
    for (const auto& p : active_) values_[p.idx] = 0.0;
    active_.clear();
}

EpisodeLog watkins_qlambda_episode(const Environment& env, QTable& q, EligibilityTraces& traces, const AgentParams& params,
                                   Rng& rng, const EpisodeOptions& opts) {
    params.validate();
    traces.clear();
    EpisodeLog log;
    Episode ep(env, rng);
    StateId s = ep.state();
    ActionId a = epsilon_greedy(q, s, params.epsilon, rng);
    while (true) {
        const Transition t = ep.step(a);
        log_step(log, opts, s, a, t.reward);
        ActionId next_action{};
        bool exploratory = false;
        double target = t.reward;
        if (!t.terminal) {
            next_action = epsilon_greedy(q, t.next_state, params.epsilon, rng);
            exploratory = !contains(greedy_actions(q, t.next_state), next_action);
            target = t.reward + params.gamma * q.max_value(t.next_state);
        }
        const double delta = target - q.value(s, a);
        emit(opts, {s, a, target, t.next_state, 1});

        traces.bump(s, a);
        const double step = params.alpha * delta;
        traces.apply_and_decay(params.gamma * params.lambda,
                               [&](StateId ts, ActionId ta, double e) { q_increment(q, ts, ta, step * e); });
        if (t.terminal) break;
        if (exploratory) traces.clear();
        s = t.next_state;
        a = next_action;
    }
    traces.clear();
    return log;
}

EpisodeLog mc_episode(const Environment& env, QTable& q, const AgentParams& params, Rng& rng, const EpisodeOptions& opts) {
    params.validate();
    EpisodeLog log;
    std::vector<TraceStep> steps;
    Episode ep(env, rng);
    StateId s = ep.state();
    while (true) {
        const ActionId a = epsilon_greedy(q, s, params.epsilon, rng);
        const Transition t = ep.step(a);
        log_step(log, opts, s, a, t.reward);
        steps.push_back({s, a, t.reward});
        if (t.terminal) break;
        s = t.next_state;
    }
    std::vector<double> returns(steps.size());
    double g = 0.0;
    for (std::size_t i = steps.size(); i-- > 0;) {
        g = steps[i].reward + params.gamma * g;
        returns[i] = g;
    }
    for (std::size_t i = 0; i < steps.size(); ++i) {
        q_update(q, steps[i].state, steps[i].action, returns[i], params.alpha);
        emit(opts, {steps[i].state, steps[i].action, returns[i], env.terminal_state(), steps.size() - i});
    }
    return log;
}

}  // namespace cvs
