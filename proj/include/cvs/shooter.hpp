#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "cvs/mdp.hpp"

namespace cvs::shooter {

inline constexpr int kRows = 10;
inline constexpr int kCols = 20;

enum Action : std::uint32_t { noop = 0, shoot_up = 1, shoot_down = 2, shoot_flat = 3 };
inline constexpr std::size_t kNumActions = 4;

struct Bullet {
    int row = 0;
    int col = 0;
    int vertical_dir = 0;  // -1 up, 0 flat, +1 down
    friend bool operator==(const Bullet&, const Bullet&) = default;
};

/// Before the shot the bullet sits on the gun and its direction is
/// meaningless; canonical states keep it at (gun_row, 0) with direction 0.
struct ShooterState {
    int gun_row = 0;
    Bullet bullet;
    bool fired = false;
    int target_row = 0;
    int target_dir = 1;  // -1 up, +1 down
    friend bool operator==(const ShooterState&, const ShooterState&) = default;
};

struct ShooterConfig {
    int obstacle_col = 7;
    std::array<int, 3> obstacle_rows{4, 5, 6};
    std::size_t max_steps = 200;

    void validate() const;
};

class ShooterEnv final : public Environment {
public:
    explicit ShooterEnv(ShooterConfig cfg = {});

    std::string name() const override { return "shooter"; }
    std::size_t num_states() const override { return kNumStates; }
    std::size_t num_actions(StateId) const override { return kNumActions; }
    StateId terminal_state() const override { return StateId{kTerminal}; }
    StateId reset(Rng& rng) const override { return encode_state(reset_state(rng)); }
    Transition step(StateId s, ActionId a, Rng& rng) const override;
    CriticalityFn criticality() const override;
    std::size_t max_steps() const override { return cfg_.max_steps; }
    double cap_reward() const override { return -1.0; }

    const ShooterConfig& config() const noexcept { return cfg_; }

    ShooterState reset_state(Rng& rng) const;

    struct Outcome {
        ShooterState next;
        double reward = 0.0;
        bool terminal = false;
    };
    /// Structured dynamics without the step cap.
    Outcome advance(const ShooterState& s, Action a) const;

    bool is_obstacle(int row, int col) const;

    static constexpr std::uint32_t kUnfiredStates = kRows * kRows * 2;
    static constexpr std::uint32_t kFiredStates = kRows * kRows * kCols * 3 * kRows * 2;
    static constexpr std::uint32_t kTerminal = kUnfiredStates + kFiredStates;
    static constexpr std::size_t kNumStates = kTerminal + 1;

    /// Injective into [0, kTerminal). Throws std::out_of_range for invalid fields.
    static StateId encode_state(const ShooterState& s);
    static ShooterState decode_state(StateId id);

private:
    ShooterConfig cfg_;
};

/// 1 before the shot, 0 after it and at TERMINAL.
CriticalityFn shooter_criticality();

}  // namespace cvs::shooter
