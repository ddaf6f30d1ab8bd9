#include "rtrl/pid_agent.hpp"

#include <cmath>

namespace rtrl {

VehicleState PidAgent::from_features(const StateVec& x) {
    if (x.size() != 4) throw ConfigError("pid agent: expected the four vehicle features");
    VehicleState s;
    s.v_desired = x[0];
    s.v_current = x[1];
    s.brake_tenths = static_cast<int>(std::lround(x[2] * 10.0));
    s.accel_tenths = static_cast<int>(std::lround(x[3] * 10.0));
    return s;
}

Action PidAgent::first_action(const StateVec& x) {
    state_ = {};
    return next_action(0.0, x);
}

Action PidAgent::next_action(double, const StateVec& x) {
    const auto d = vehicle::pid_reference(from_features(x), gains_, state_, dt_);
    state_ = d.state;
    ++stats_.actions;
    return d.action;
}

}  // namespace rtrl
