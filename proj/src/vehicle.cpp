#include "rtrl/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtrl/mountain_car.hpp"

namespace rtrl {
namespace vehicle {

VehicleState apply_pedals(const VehicleState& s, Action a) {
    VehicleState n = s;
    switch (a) {
        case Noop: break;
        case BrakeUp: n.brake_tenths = std::min(n.brake_tenths + 1, 10); n.accel_tenths = 0; break;
        case BrakeDown: n.brake_tenths = std::max(n.brake_tenths - 1, 0); n.accel_tenths = 0; break;
        case AccelUp: n.accel_tenths = std::min(n.accel_tenths + 1, 10); n.brake_tenths = 0; break;
        case AccelDown: n.accel_tenths = std::max(n.accel_tenths - 1, 0); n.brake_tenths = 0; break;
        default: throw ConfigError("vehicle: invalid action");
    }
    return n;
}

Transition step(const VehicleState& s, Action a, double dt, const VehicleParams& p) {
    if (std::abs(dt - p.control_period) > 1e-12) throw ConfigError("vehicle: dt must equal the control period");
    VehicleState n = apply_pedals(s, a);
    const double dv = p.max_accel * n.accel() - p.max_brake * n.brake() - p.rolling - p.drag * s.v_current;
    n.v_current = std::clamp(s.v_current + dt * dv, 0.0, p.v_max);
    return Transition{n, -10.0 * std::abs(n.v_desired - n.v_current)};
}

VehicleState reset(double v_start, double v_target) {
    auto ok = [](double v) { return v >= 0.0 && v <= kMaxTarget; };
    if (!ok(v_start) || !ok(v_target)) throw ConfigError("vehicle: start and target must lie in [0, 11] m/s");
    return VehicleState{v_target, v_start, 0, 0};
}

VehicleState random_reset(Rng& rng) {
    std::uniform_int_distribution<int> grid(0, static_cast<int>(kMaxTarget * 2));
    const double start = grid(rng) * 0.5;
    const double target = grid(rng) * 0.5;
    return reset(start, target);
}

Discretizer discretizer() {
    return Discretizer({{-0.25, 11.25, 23}, {0.0, 11.1, 111}, {-0.05, 1.05, 11}, {-0.05, 1.05, 11}});
}

StateVec features(const VehicleState& s) { return {s.v_desired, s.v_current, s.brake(), s.accel()}; }

PidDecision pid_reference(const VehicleState& s, const PidGains& g, const PidState& st, double dt) {
    const double e = s.v_desired - s.v_current;
    PidState next = st;
    next.integral += e * dt;
    const double de = st.prev_error ? (e - *st.prev_error) / dt : 0.0;
    next.prev_error = e;
    const double u = g.kp * e + g.ki * next.integral + g.kd * de;

    const double target_accel = u > 0.0 ? std::min(u, 1.0) : 0.0;
    const double target_brake = u < 0.0 ? std::min(-u, 1.0) : 0.0;
    auto distance = [&](const VehicleState& p) {
        return std::abs(p.brake() - target_brake) + std::abs(p.accel() - target_accel);
    };
    Action best = Noop;
    double best_d = distance(s);
    for (Action a = 1; a < kNumActions; ++a) {
        const double d = distance(apply_pedals(s, a));
        if (d < best_d - 1e-9) {
            best = a;
            best_d = d;
        }
    }
    return PidDecision{best, next, u};
}

}  // namespace vehicle

Vehicle::Vehicle(std::string name, std::optional<std::pair<double, double>> fixed, VehicleParams params)
    : name_(std::move(name)), fixed_(fixed), params_(params), disc_(vehicle::discretizer()) {
    if (fixed_) state_ = vehicle::reset(fixed_->first, fixed_->second);
}

StateVec Vehicle::reset(Rng& rng) {
    state_ = fixed_ ? vehicle::reset(fixed_->first, fixed_->second) : vehicle::random_reset(rng);
    steps_ = 0;
    return state();
}

StepResult Vehicle::step(Action a) {
    const vehicle::Transition t = vehicle::step(state_, a, params_.control_period, params_);
    state_ = t.next;
    ++steps_;
    return StepResult{state(), t.reward, false, steps_ >= params_.horizon};
}

std::unique_ptr<Environment> make_environment(const std::string& name) {
    if (name == "mcar") return std::make_unique<MountainCar>();
    if (name == "car2to7") return std::make_unique<Vehicle>("car2to7", std::make_pair(2.0, 7.0));
    if (name == "carrandom") return std::make_unique<Vehicle>("carrandom", std::nullopt);
    throw ConfigError("unknown environment '" + name + "' (expected mcar, car2to7 or carrandom)");
}

}  // namespace rtrl
