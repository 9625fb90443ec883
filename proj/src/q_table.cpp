#include "cvs/q_table.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace cvs {

QTable::QTable(const Environment& env, double initial_value)
    : terminal_(env.terminal_state()), initial_value_(initial_value) {
    const std::size_t n = env.num_states();
    offsets_.resize(n + 1, 0);
    for (std::uint32_t s = 0; s < n; ++s) {
        const StateId id{s};
        const std::size_t width = id == terminal_ ? 0 : env.num_actions(id);
        offsets_[s + 1] = offsets_[s] + width;
    }
    values_.assign(offsets_.back(), initial_value);
}

double QTable::value(StateId s, ActionId a) const {
    if (s == terminal_) return 0.0;
    const auto r = row(s);
    if (a.value >= r.size()) throw ContractError("action index out of range");
    return r[a.value];
}

std::span<const double> QTable::row(StateId s) const {
    if (s.value + 1 >= offsets_.size()) throw ContractError("state index out of range");
    const std::size_t begin = offsets_[s.value];
    return {values_.data() + begin, offsets_[s.value + 1] - begin};
}

double QTable::max_value(StateId s) const {
    if (s == terminal_) return 0.0;
    const auto r = row(s);
    return *std::max_element(r.begin(), r.end());
}

double& QTable::writable(StateId s, ActionId a) {
    if (s == terminal_) throw ContractError("the TERMINAL row is immutable");
    if (s.value + 1 >= offsets_.size()) throw ContractError("state index out of range");
    const std::size_t begin = offsets_[s.value];
    if (a.value >= offsets_[s.value + 1] - begin) throw ContractError("action index out of range");
    ++writes_;
    return values_[begin + a.value];
}

bool operator==(const QTable& a, const QTable& b) {
    if (a.offsets_ != b.offsets_) return false;
    return std::equal(a.values_.begin(), a.values_.end(), b.values_.begin(), [](double x, double y) {
        return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
    });
}

std::vector<ActionId> greedy_actions(const QTable& q, StateId s) {
    if (s == q.terminal_state()) throw ContractError("greedy_actions at TERMINAL");
    const auto r = q.row(s);
    const double best = *std::max_element(r.begin(), r.end());
    std::vector<ActionId> out;
    for (std::uint32_t a = 0; a < r.size(); ++a) {
        if (r[a] == best) out.push_back(ActionId{a});
    }
    return out;
}

ActionId epsilon_greedy(const QTable& q, StateId s, double epsilon, Rng& rng) {
    if (s == q.terminal_state()) throw ContractError("epsilon_greedy at TERMINAL");
    const bool explore = rng.uniform01() < epsilon;
    if (explore) {
        return ActionId{static_cast<std::uint32_t>(rng.uniform_index(q.num_actions(s)))};
    }
    const auto greedy = greedy_actions(q, s);
    return greedy[rng.uniform_index(greedy.size())];
}

void q_update(QTable& q, StateId s, ActionId a, double target, double alpha) {
    double& v = q.writable(s, a);
    v = v + alpha * (target - v);
}

void q_increment(QTable& q, StateId s, ActionId a, double delta) {
    double& v = q.writable(s, a);
    v = v + delta;
}

}  // namespace cvs
