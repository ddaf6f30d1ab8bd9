#pragma once

#include "rtrl/agent.hpp"
#include "rtrl/vehicle.hpp"

namespace rtrl {

/// Non-learning reference controller for the vehicle tasks. Rebuilds the
/// vehicle state from the observed features and follows vehicle::pid_reference.
class PidAgent final : public Agent {
public:
    explicit PidAgent(vehicle::PidGains gains = {}, double dt = VehicleParams{}.control_period)
        : gains_(gains), dt_(dt) {}

    std::string name() const override { return "pid"; }
    Action first_action(const StateVec& s) override;
    Action next_action(double reward, const StateVec& s) override;
    void end_episode(double, const StateVec&, bool) override { state_ = {}; }
    AgentStats stats() const override { return stats_; }

    static VehicleState from_features(const StateVec& x);

private:
    vehicle::PidGains gains_;
    double dt_;
    vehicle::PidState state_;
    AgentStats stats_;
};

}  // namespace rtrl
