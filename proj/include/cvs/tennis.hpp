#pragma once

#include <cstddef>

#include "cvs/mdp.hpp"

namespace cvs::tennis {

inline constexpr int kRows = 20;
inline constexpr int kCols = 40;
inline constexpr int kAgentCol = 1;
inline constexpr int kOpponentCol = kCols - 2;

enum Action : std::uint32_t { up = 0, down = 1, stay = 2 };
inline constexpr std::size_t kNumActions = 3;

struct Ball {
    int row = 0;
    int col = 0;
    int h_dir = -1;  // -1 toward the agent (left), +1 toward the opponent
    int v_dir = 0;   // -1 up, 0 flat, +1 down
    friend bool operator==(const Ball&, const Ball&) = default;
};

struct TennisState {
    Ball ball;
    int agent_row = kRows / 2;
    int opponent_row = kRows / 2;
    friend bool operator==(const TennisState&, const TennisState&) = default;
};

struct TennisConfig {
    double p_optimal = 0.8;
    std::size_t max_steps = 1000;

    void validate() const;
};

class TennisEnv final : public Environment {
public:
    explicit TennisEnv(TennisConfig cfg = {});

    std::string name() const override { return "tennis"; }
    std::size_t num_states() const override { return kNumStates; }
    std::size_t num_actions(StateId) const override { return kNumActions; }
    StateId terminal_state() const override { return StateId{kTerminal}; }
    StateId reset(Rng& rng) const override { return encode_state(reset_state(rng)); }
    Transition step(StateId s, ActionId a, Rng& rng) const override;
    CriticalityFn criticality() const override;
    std::size_t max_steps() const override { return cfg_.max_steps; }
    double cap_reward() const override { return 0.0; }

    const TennisConfig& config() const noexcept { return cfg_; }

    TennisState reset_state(Rng& rng) const;

    struct Outcome {
        TennisState next;
        double reward = 0.0;
        bool terminal = false;
    };
    /// One step without the step cap; the opponent's move draws from rng.
    Outcome advance(const TennisState& s, Action agent, Rng& rng) const;
    /// Same, with the opponent's action given explicitly.
    Outcome advance_with(const TennisState& s, Action agent, Action opponent) const;

    Action sample_opponent_action(const TennisState& s, Rng& rng) const;

    static constexpr std::uint32_t kTerminal = kRows * kCols * 6 * kRows * kRows;
    static constexpr std::size_t kNumStates = kTerminal + 1;

    static StateId encode_state(const TennisState& s);
    static TennisState decode_state(StateId id);

private:
    TennisConfig cfg_;
};

/// Moves the opponent toward the ball's current row; stay when aligned.
Action opponent_optimal_action(const TennisState& s);

/// 1 while the ball travels toward the agent, 0 otherwise and at TERMINAL.
CriticalityFn tennis_criticality();

}  // namespace cvs::tennis
