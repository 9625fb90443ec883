#include "cvs/mdp.hpp"

#include <cmath>
#include <stdexcept>

namespace cvs {

void AgentParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0, 1]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0, 1]");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must be in [0, 1]");
    if (n < 1) throw std::invalid_argument("n must be a positive integer");
}

CriticalityFn CriticalityFn::constant(double value) {
    if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("criticality must be in [0, 1]");
    return CriticalityFn([value](StateId) { return value; });
}

Episode::Episode(const Environment& env, Rng& rng) : env_(&env), rng_(&rng), state_(env.reset(rng)) {
    if (env.is_terminal(state_)) throw ContractError(env.name() + ": reset returned TERMINAL");
}

Transition Episode::step(ActionId a) {
    if (done_) throw ContractError("episode already terminated");
    Transition t = env_->step(state_, a, *rng_);
    ++steps_;
    const std::size_t cap = env_->max_steps();
    if (!t.terminal && cap != 0 && steps_ >= cap) {
        t = Transition{env_->cap_reward(), env_->terminal_state(), true};
    }
    state_ = t.next_state;
    done_ = t.terminal;
    return t;
}

}  // namespace cvs
