#pragma once

#include <optional>

#include "rtrl/environment.hpp"

namespace rtrl {

/// Longitudinal vehicle state. Pedal positions are stored in tenths so that
/// they are exact multiples of 0.1.
struct VehicleState {
    double v_desired = 0.0;
    double v_current = 0.0;
    int brake_tenths = 0;
    int accel_tenths = 0;

    double brake() const { return brake_tenths / 10.0; }
    double accel() const { return accel_tenths / 10.0; }
};

struct VehicleParams {
    double max_accel = 3.0;   // m/s^2 at full throttle
    double max_brake = 6.0;   // m/s^2 at full brake
    double rolling = 0.1;     // m/s^2
    double drag = 0.05;       // 1/s
    double v_max = 12.0;      // m/s
    double control_period = 0.05;  // s (20 Hz)
    int horizon = 200;             // steps (10 s)
};

namespace vehicle {

enum Actions : Action { Noop = 0, BrakeUp = 1, BrakeDown = 2, AccelUp = 3, AccelDown = 4 };
inline constexpr int kNumActions = 5;
inline constexpr double kMaxTarget = 11.0;

struct Transition {
    VehicleState next;
    double reward;
};

/// Pedal update for `a`; the touched pedal moves by 0.1, the other is zeroed.
VehicleState apply_pedals(const VehicleState& s, Action a);
/// One control period. Throws ConfigError when dt differs from the period.
Transition step(const VehicleState& s, Action a, double dt, const VehicleParams& p = {});
VehicleState reset(double v_start, double v_target);
/// Start and target drawn uniformly from the 0.5 m/s grid on [0, 11].
VehicleState random_reset(Rng& rng);
Discretizer discretizer();
StateVec features(const VehicleState& s);

struct PidGains {
    double kp = 1.0;
    double ki = 0.0;
    double kd = 0.02;
};

struct PidState {
    double integral = 0.0;
    std::optional<double> prev_error;
};

struct PidDecision {
    Action action;
    PidState state;
    double command;  // u; positive asks for throttle, negative for brake
};

/// PID on velocity error mapped onto the discrete pedal actions: the action
/// whose resulting pedal pair is closest (L1) to the commanded target, with
/// noop preferred on ties.
PidDecision pid_reference(const VehicleState& s, const PidGains& gains, const PidState& st,
                          double dt = VehicleParams{}.control_period);

}  // namespace vehicle

class Vehicle final : public Environment {
public:
    /// Fixed start/target when both are given, random per episode otherwise.
    Vehicle(std::string name, std::optional<std::pair<double, double>> fixed, VehicleParams params = {});

    std::string name() const override { return name_; }
    StateVec reset(Rng& rng) override;
    StepResult step(Action a) override;
    StateVec state() const override { return vehicle::features(state_); }

    int num_actions() const override { return vehicle::kNumActions; }
    const Discretizer& discretizer() const override { return disc_; }
    std::vector<std::string> feature_names() const override {
        return {"v_desired", "v_current", "brake", "accel"};
    }
    int horizon() const override { return params_.horizon; }
    double r_max() const override { return 0.0; }
    double r_min() const override { return -10.0 * params_.v_max; }
    Action hold_action(Action) const override { return vehicle::Noop; }

    const VehicleState& vehicle_state() const { return state_; }
    const VehicleParams& params() const { return params_; }

private:
    std::string name_;
    std::optional<std::pair<double, double>> fixed_;
    VehicleParams params_;
    Discretizer disc_;
    VehicleState state_;
    int steps_ = 0;
};

}  // namespace rtrl
