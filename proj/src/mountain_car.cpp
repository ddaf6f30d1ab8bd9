#include "rtrl/mountain_car.hpp"

#include <algorithm>
#include <cmath>

namespace rtrl {
namespace mcar {

Transition step(const MCarState& s, Action a) {
    double v = s.velocity + kForce * (a - 1) - kGravity * std::cos(3.0 * s.position);
    v = std::clamp(v, -kMaxSpeed, kMaxSpeed);
    double p = std::clamp(s.position + v, kMinPosition, kMaxPosition);
    if (p == kMinPosition) v = 0.0;
    const bool terminal = p >= kGoalPosition;
    return Transition{MCarState{p, v}, terminal ? 0.0 : -1.0, terminal};
}

MCarState reset(Rng& rng) {
    std::uniform_real_distribution<double> pos(-0.6, -0.4);
    return MCarState{pos(rng), 0.0};
}

Discretizer discretizer() {
    return Discretizer({{kMinPosition, kMaxPosition, 100}, {-kMaxSpeed, kMaxSpeed, 100}});
}

Experience jumpstart() {
    const Discretizer d = discretizer();
    const MCarState s{0.495, 0.07};
    const Transition t = step(s, Right);
    return Experience{d.discretize({s.position, s.velocity}), Right,
                      d.discretize({t.next.position, t.next.velocity}), t.reward, t.terminal};
}

}  // namespace mcar

MountainCar::MountainCar(int step_cap) : disc_(mcar::discretizer()), step_cap_(step_cap) {
    if (step_cap < 1) throw ConfigError("mountain car: step cap must be positive");
}

StateVec MountainCar::reset(Rng& rng) {
    state_ = mcar::reset(rng);
    steps_ = 0;
    return state();
}

StepResult MountainCar::step(Action a) {
    if (a < 0 || a >= 3) throw ConfigError("mountain car: invalid action");
    const mcar::Transition t = mcar::step(state_, a);
    state_ = t.next;
    ++steps_;
    return StepResult{state(), t.reward, t.terminal, !t.terminal && steps_ >= step_cap_};
}

}  // namespace rtrl
