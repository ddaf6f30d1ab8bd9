#pragma once

#include "rtrl/environment.hpp"

namespace rtrl {

struct MCarState {
    double position = -0.5;
    double velocity = 0.0;
};

namespace mcar {

inline constexpr double kMinPosition = -1.2;
inline constexpr double kMaxPosition = 0.6;
inline constexpr double kMaxSpeed = 0.07;
inline constexpr double kGoalPosition = 0.5;
inline constexpr double kForce = 0.001;
inline constexpr double kGravity = 0.0025;
inline constexpr int kDefaultStepCap = 5000;

enum Actions : Action { Left = 0, None = 1, Right = 2 };

struct Transition {
    MCarState next;
    double reward;
    bool terminal;
};

Transition step(const MCarState& s, Action a);
MCarState reset(Rng& rng);
Discretizer discretizer();
/// The single goal-reaching experience used to seed every learner.
Experience jumpstart();

}  // namespace mcar

class MountainCar final : public Environment {
public:
    explicit MountainCar(int step_cap = mcar::kDefaultStepCap);

    std::string name() const override { return "mcar"; }
    StateVec reset(Rng& rng) override;
    StepResult step(Action a) override;
    StateVec state() const override { return {state_.position, state_.velocity}; }

    int num_actions() const override { return 3; }
    const Discretizer& discretizer() const override { return disc_; }
    std::vector<std::string> feature_names() const override { return {"position", "velocity"}; }
    int horizon() const override { return step_cap_; }
    double r_max() const override { return 0.0; }
    double r_min() const override { return -1.0; }
    Action hold_action(Action last_applied) const override {
        return last_applied < 0 ? mcar::None : last_applied;
    }
    std::vector<Experience> jumpstart() const override { return {mcar::jumpstart()}; }

    void set_state(const MCarState& s) { state_ = s; }

private:
    Discretizer disc_;
    MCarState state_;
    int step_cap_;
    int steps_ = 0;
};

}  // namespace rtrl
