#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "cvs/rng.hpp"

namespace cvs {

/// Dense index into an environment's state space, in [0, num_states).
struct StateId {
    std::uint32_t value = 0;
    friend constexpr auto operator<=>(StateId, StateId) = default;
};

/// Dense index into the actions available at one state, in [0, num_actions(s)).
struct ActionId {
    std::uint32_t value = 0;
    friend constexpr auto operator<=>(ActionId, ActionId) = default;
};

struct Transition {
    double reward = 0.0;
    StateId next_state;
    bool terminal = false;
};

/// Raised when a caller breaks an environment or table contract
/// (stepping from TERMINAL, out-of-range action, writing the TERMINAL row).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct AgentParams {
    double alpha = 0.1;
    double epsilon = 0.1;
    double gamma = 1.0;
    double lambda = 0.9;
    int n = 1;

    /// Throws std::invalid_argument naming the first out-of-range field.
    void validate() const;
};

/// Criticality h: StateId -> [0, 1]. Deterministic per state.
class CriticalityFn {
public:
    using Fn = std::function<double(StateId)>;

    CriticalityFn() = default;
    explicit CriticalityFn(Fn fn) : fn_(std::move(fn)) {}

    double operator()(StateId s) const { return fn_(s); }
    explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

    static CriticalityFn constant(double value);

private:
    Fn fn_;
};

/// Uniform facade over the tabular environments. Implementations are
/// immutable after construction; all per-episode state lives in StateId values
/// and in the Episode wrapper below.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string name() const = 0;
    virtual std::size_t num_states() const = 0;
    virtual std::size_t num_actions(StateId s) const = 0;
    virtual StateId terminal_state() const = 0;

    /// Returns a non-terminal start state.
    virtual StateId reset(Rng& rng) const = 0;

    /// One transition ignoring any step cap. Throws ContractError from TERMINAL
    /// or on an invalid action.
    virtual Transition step(StateId s, ActionId a, Rng& rng) const = 0;

    virtual CriticalityFn criticality() const = 0;

    /// Episode length cap; 0 means uncapped.
    virtual std::size_t max_steps() const { return 0; }
    /// Reward delivered when the cap ends an episode.
    virtual double cap_reward() const { return 0.0; }

    bool is_terminal(StateId s) const { return s == terminal_state(); }
};

/// Drives one episode of an Environment and applies its step cap: once
/// `max_steps()` transitions have elapsed without a natural termination, the
/// last transition is replaced by (cap_reward, TERMINAL).
class Episode {
public:
    Episode(const Environment& env, Rng& rng);

    StateId state() const noexcept { return state_; }
    std::size_t steps() const noexcept { return steps_; }
    bool done() const noexcept { return done_; }

    Transition step(ActionId a);

private:
    const Environment* env_;
    Rng* rng_;
    StateId state_;
    std::size_t steps_ = 0;
    bool done_ = false;
};

}  // namespace cvs
