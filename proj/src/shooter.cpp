#include "cvs/shooter.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cvs::shooter {

namespace {

// Moves one cell along dir, reflecting dir first if the move would leave [0, kRows).
void reflect_move(int& row, int& dir) {
    if (row + dir < 0 || row + dir >= kRows) dir = -dir;
    row += dir;
}

void check_range(int v, int lo, int hi, const char* field) {
    if (v < lo || v >= hi) throw std::out_of_range(std::string("shooter state: ") + field + " out of range");
}

}  // namespace

void ShooterConfig::validate() const {
    if (obstacle_col <= 0 || obstacle_col >= kCols - 1) {
        throw std::invalid_argument("obstacle_col must avoid the first and last columns");
    }
    for (int r : obstacle_rows) {
        if (r < 0 || r >= kRows) throw std::invalid_argument("obstacle_rows must lie in [0, 10)");
    }
    if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
}

ShooterEnv::ShooterEnv(ShooterConfig cfg) : cfg_(cfg) { cfg_.validate(); }

ShooterState ShooterEnv::reset_state(Rng& rng) const {
    ShooterState s;
    s.gun_row = static_cast<int>(rng.uniform_index(kRows));
    s.bullet = Bullet{s.gun_row, 0, 0};
    s.fired = false;
    s.target_row = static_cast<int>(rng.uniform_index(kRows));
    s.target_dir = rng.uniform_index(2) == 0 ? -1 : 1;
    return s;
}

bool ShooterEnv::is_obstacle(int row, int col) const {
    return col == cfg_.obstacle_col && std::find(cfg_.obstacle_rows.begin(), cfg_.obstacle_rows.end(), row) != cfg_.obstacle_rows.end();
}

ShooterEnv::Outcome ShooterEnv::advance(const ShooterState& s, Action a) const {
    Outcome out{s, 0.0, false};
    ShooterState& n = out.next;

    if (!n.fired && a != noop) {
        n.fired = true;
        n.bullet.vertical_dir = a == shoot_up ? -1 : a == shoot_down ? 1 : 0;
    }
    if (n.fired) {
        n.bullet.col += 1;
        reflect_move(n.bullet.row, n.bullet.vertical_dir);
        if (is_obstacle(n.bullet.row, n.bullet.col)) {
            out.reward = -1.0;
            out.terminal = true;
            return out;
        }
        // The bullet is scored against the target's position before the target moves.
        if (n.bullet.col == kCols - 1) {
            out.reward = n.bullet.row == n.target_row ? 1.0 : -1.0;
            out.terminal = true;
            return out;
        }
    }
    reflect_move(n.target_row, n.target_dir);
    return out;
}

Transition ShooterEnv::step(StateId s, ActionId a, Rng&) const {
    if (s.value == kTerminal) throw ContractError("shooter: step from TERMINAL");
    if (a.value >= kNumActions) throw ContractError("shooter: invalid action " + std::to_string(a.value));
    const Outcome o = advance(decode_state(s), static_cast<Action>(a.value));
    if (o.terminal) return Transition{o.reward, terminal_state(), true};
    return Transition{o.reward, encode_state(o.next), false};
}

CriticalityFn ShooterEnv::criticality() const { return shooter_criticality(); }

StateId ShooterEnv::encode_state(const ShooterState& s) {
    check_range(s.gun_row, 0, kRows, "gun_row");
    check_range(s.target_row, 0, kRows, "target_row");
    if (s.target_dir != -1 && s.target_dir != 1) throw std::out_of_range("shooter state: target_dir must be +-1");
    const std::uint32_t dir = s.target_dir > 0 ? 1 : 0;
    if (!s.fired) {
        return StateId{static_cast<std::uint32_t>((s.gun_row * kRows + s.target_row) * 2) + dir};
    }
    check_range(s.bullet.row, 0, kRows, "bullet.row");
    check_range(s.bullet.col, 0, kCols, "bullet.col");
    check_range(s.bullet.vertical_dir, -1, 2, "bullet.vertical_dir");
    std::uint32_t idx = static_cast<std::uint32_t>(s.gun_row);
    idx = idx * kRows + static_cast<std::uint32_t>(s.bullet.row);
    idx = idx * kCols + static_cast<std::uint32_t>(s.bullet.col);
    idx = idx * 3 + static_cast<std::uint32_t>(s.bullet.vertical_dir + 1);
    idx = idx * kRows + static_cast<std::uint32_t>(s.target_row);
    idx = idx * 2 + dir;
    return StateId{kUnfiredStates + idx};
}

ShooterState ShooterEnv::decode_state(StateId id) {
    if (id.value >= kTerminal) throw std::out_of_range("shooter: cannot decode TERMINAL or out-of-range id");
    ShooterState s;
    std::uint32_t v = id.value;
    if (v < kUnfiredStates) {
        s.target_dir = (v % 2) ? 1 : -1;
        v /= 2;
        s.target_row = static_cast<int>(v % kRows);
        s.gun_row = static_cast<int>(v / kRows);
        s.bullet = Bullet{s.gun_row, 0, 0};
        s.fired = false;
        return s;
    }
    v -= kUnfiredStates;
    s.fired = true;
    s.target_dir = (v % 2) ? 1 : -1;
    v /= 2;
    s.target_row = static_cast<int>(v % kRows);
    v /= kRows;
    s.bullet.vertical_dir = static_cast<int>(v % 3) - 1;
    v /= 3;
    s.bullet.col = static_cast<int>(v % kCols);
    v /= kCols;
    s.bullet.row = static_cast<int>(v % kRows);
    s.gun_row = static_cast<int>(v / kRows);
    return s;
}

CriticalityFn shooter_criticality() {
    return CriticalityFn([](StateId s) {
        if (s.value >= ShooterEnv::kTerminal) return 0.0;
        return s.value < ShooterEnv::kUnfiredStates ? 1.0 : 0.0;
    });
}

}  // namespace cvs::shooter
