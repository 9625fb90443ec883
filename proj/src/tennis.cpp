#include "cvs/tennis.hpp"

#include <stdexcept>
#include <string>

namespace cvs::tennis {

namespace {

int move_racket(int row, Action a) {
    const int next = row + (a == up ? -1 : a == down ? 1 : 0);
    return next < 0 || next >= kRows ? row : next;
}

void check_range(int v, int lo, int hi, const char* field) {
    if (v < lo || v >= hi) throw std::out_of_range(std::string("tennis state: ") + field + " out of range");
}

}  // namespace

void TennisConfig::validate() const {
    if (!(p_optimal >= 0.0 && p_optimal <= 1.0)) throw std::invalid_argument("p_optimal must be in [0, 1]");
    if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
}

TennisEnv::TennisEnv(TennisConfig cfg) : cfg_(cfg) { cfg_.validate(); }

TennisState TennisEnv::reset_state(Rng& rng) const {
    TennisState s;
    s.ball = Ball{kRows / 2, kCols / 2, -1, static_cast<int>(rng.uniform_index(3)) - 1};
    s.agent_row = kRows / 2;
    s.opponent_row = kRows / 2;
    return s;
}

Action opponent_optimal_action(const TennisState& s) {
    if (s.opponent_row < s.ball.row) return down;
    if (s.opponent_row > s.ball.row) return up;
    return stay;
}

Action TennisEnv::sample_opponent_action(const TennisState& s, Rng& rng) const {
    const bool optimal = rng.bernoulli(cfg_.p_optimal);
    const auto random = static_cast<Action>(rng.uniform_index(kNumActions));
    return optimal ? opponent_optimal_action(s) : random;
}

TennisEnv::Outcome TennisEnv::advance(const TennisState& s, Action agent, Rng& rng) const {
    return advance_with(s, agent, sample_opponent_action(s, rng));
}

TennisEnv::Outcome TennisEnv::advance_with(const TennisState& s, Action agent, Action opponent) const {
    Outcome out{s, 0.0, false};
    TennisState& n = out.next;
    n.agent_row = move_racket(n.agent_row, agent);
    n.opponent_row = move_racket(n.opponent_row, opponent);

    Ball& b = n.ball;
    if (b.row + b.v_dir < 0 || b.row + b.v_dir >= kRows) b.v_dir = -b.v_dir;
    b.row += b.v_dir;
    b.col += b.h_dir;
    if ((b.col == kAgentCol && b.row == n.agent_row) || (b.col == kOpponentCol && b.row == n.opponent_row)) {
        b.h_dir = -b.h_dir;
    }
    if (b.col == 0) {
        out.reward = -1.0;
        out.terminal = true;
    } else if (b.col == kCols - 1) {
        out.reward = 1.0;
        out.terminal = true;
    }
    return out;
}

Transition TennisEnv::step(StateId s, ActionId a, Rng& rng) const {
    if (s.value == kTerminal) throw ContractError("tennis: step from TERMINAL");
    if (a.value >= kNumActions) throw ContractError("tennis: invalid action " + std::to_string(a.value));
    const Outcome o = advance(decode_state(s), static_cast<Action>(a.value), rng);
    if (o.terminal) return Transition{o.reward, terminal_state(), true};
    return Transition{o.reward, encode_state(o.next), false};
}

CriticalityFn TennisEnv::criticality() const { return tennis_criticality(); }

StateId TennisEnv::encode_state(const TennisState& s) {
    check_range(s.ball.row, 0, kRows, "ball.row");
    check_range(s.ball.col, 0, kCols, "ball.col");
    if (s.ball.h_dir != -1 && s.ball.h_dir != 1) throw std::out_of_range("tennis state: h_dir must be +-1");
    check_range(s.ball.v_dir, -1, 2, "ball.v_dir");
    check_range(s.agent_row, 0, kRows, "agent_row");
    check_range(s.opponent_row, 0, kRows, "opponent_row");
    const std::uint32_t dir = static_cast<std::uint32_t>((s.ball.h_dir > 0 ? 3 : 0) + s.ball.v_dir + 1);
    std::uint32_t idx = static_cast<std::uint32_t>(s.ball.row);
    idx = idx * kCols + static_cast<std::uint32_t>(s.ball.col);
    idx = idx * 6 + dir;
    idx = idx * kRows + static_cast<std::uint32_t>(s.agent_row);
    idx = idx * kRows + static_cast<std::uint32_t>(s.opponent_row);
    return StateId{idx};
}

TennisState TennisEnv::decode_state(StateId id) {
    if (id.value >= kTerminal) throw std::out_of_range("tennis: cannot decode TERMINAL or out-of-range id");
    TennisState s;
    std::uint32_t v = id.value;
    s.opponent_row = static_cast<int>(v % kRows);
    v /= kRows;
    s.agent_row = static_cast<int>(v % kRows);
    v /= kRows;
    const int dir = static_cast<int>(v % 6);
    v /= 6;
    s.ball.h_dir = dir >= 3 ? 1 : -1;
    s.ball.v_dir = dir % 3 - 1;
    s.ball.col = static_cast<int>(v % kCols);
    s.ball.row = static_cast<int>(v / kCols);
    return s;
}

CriticalityFn tennis_criticality() {
    return CriticalityFn([](StateId s) {
        if (s.value >= TennisEnv::kTerminal) return 0.0;
        return TennisEnv::decode_state(s).ball.h_dir < 0 ? 1.0 : 0.0;
    });
}

}  // namespace cvs::tennis
