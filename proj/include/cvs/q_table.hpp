#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cvs/mdp.hpp"
#include "cvs/rng.hpp"

namespace cvs {

/// Dense (state, action) -> value table. Rows may have different widths.
/// The TERMINAL row is empty and reads as 0. Writes go only through
/// q_update / q_increment, which count them.
class QTable {
public:
    QTable(const Environment& env, double initial_value);

    std::size_t num_states() const noexcept { return offsets_.size() - 1; }
    std::size_t num_actions(StateId s) const { return offsets_.at(s.value + 1) - offsets_[s.value]; }
    StateId terminal_state() const noexcept { return terminal_; }
    double initial_value() const noexcept { return initial_value_; }

    /// Q(s, a); 0 for TERMINAL.
    double value(StateId s, ActionId a) const;
    std::span<const double> row(StateId s) const;
    double max_value(StateId s) const;

    std::uint64_t write_count() const noexcept { return writes_; }
    std::span<const double> raw() const noexcept { return values_; }

    friend bool operator==(const QTable& a, const QTable& b);

private:
    friend void q_update(QTable& q, StateId s, ActionId a, double target, double alpha);
    friend void q_increment(QTable& q, StateId s, ActionId a, double delta);

    double& writable(StateId s, ActionId a);

    std::vector<std::size_t> offsets_;
    std::vector<double> values_;
    StateId terminal_;
    double initial_value_;
    std::uint64_t writes_ = 0;
};

/// Bit-level equality of every stored value (TERMINAL layout included).
bool operator==(const QTable& a, const QTable& b);

/// All actions attaining max_a Q(s, a). Throws ContractError at TERMINAL.
std::vector<ActionId> greedy_actions(const QTable& q, StateId s);

/// With probability epsilon a uniform action at s, otherwise a uniform member
/// of greedy_actions(q, s). Makes the same two rng calls on every path.
ActionId epsilon_greedy(const QTable& q, StateId s, double epsilon, Rng& rng);

/// Q(s,a) <- Q(s,a) + alpha * (target - Q(s,a)).
void q_update(QTable& q, StateId s, ActionId a, double target, double alpha);

/// Q(s,a) <- Q(s,a) + delta. Used by trace-based updates where one TD error is
/// spread over many pairs.
void q_increment(QTable& q, StateId s, ActionId a, double delta);

}  // namespace cvs
