#pragma once

#include <chrono>
#include <stdexcept>
#include <thread>

#include "rtrl/agent.hpp"
#include "rtrl/environment.hpp"

namespace testenv {

using namespace rtrl;

/// 5x5 deterministic gridworld from (0,0) to the terminal corner (4,4);
/// -1 per step, 0 on reaching the goal. Actions: up, down, left, right.
class GridEnv final : public Environment {
public:
    explicit GridEnv(int horizon = 100) : horizon_(horizon), disc_({{-0.5, 4.5, 5}, {-0.5, 4.5, 5}}) {}

    std::string name() const override { return "grid"; }
    StateVec reset(Rng&) override {
        x_ = y_ = 0;
        steps_ = 0;
        return state();
    }
    StepResult step(Action a) override {
        if (a == 0) y_ = std::min(y_ + 1, 4);
        if (a == 1) y_ = std::max(y_ - 1, 0);
        if (a == 2) x_ = std::max(x_ - 1, 0);
        if (a == 3) x_ = std::min(x_ + 1, 4);
        ++steps_;
        const bool goal = x_ == 4 && y_ == 4;
        return {state(), goal ? 0.0 : -1.0, goal, !goal && steps_ >= horizon_};
    }
    StateVec state() const override { return {double(x_), double(y_)}; }
    int num_actions() const override { return 4; }
    const Discretizer& discretizer() const override { return disc_; }
    std::vector<std::string> feature_names() const override { return {"x", "y"}; }
    int horizon() const override { return horizon_; }
    double r_max() const override { return 0.0; }
    double r_min() const override { return -1.0; }
    Action hold_action(Action last) const override { return last < 0 ? 0 : last; }

private:
    int horizon_;
    Discretizer disc_;
    int x_ = 0, y_ = 0, steps_ = 0;
};

/// Agent that always answers `action` after sleeping for `delay`.
class SleepyAgent final : public Agent {
public:
    SleepyAgent(Action action, std::chrono::milliseconds delay) : action_(action), delay_(delay) {}
    std::string name() const override { return "sleepy"; }
    Action first_action(const StateVec&) override { return answer(); }
    Action next_action(double, const StateVec&) override {
        ++stats_.experiences_received;
        return answer();
    }
    void end_episode(double, const StateVec&, bool) override { ++stats_.experiences_received; }
    AgentStats stats() const override { return stats_; }

private:
    Action answer() {
        std::this_thread::sleep_for(delay_);
        ++stats_.actions;
        return action_;
    }
    Action action_;
    std::chrono::milliseconds delay_;
    AgentStats stats_;
};

/// Agent that fails after a number of calls.
class FailingAgent final : public Agent {
public:
    explicit FailingAgent(int calls) : left_(calls) {}
    std::string name() const override { return "failing"; }
    Action first_action(const StateVec&) override { return tick(); }
    Action next_action(double, const StateVec&) override { return tick(); }
    void end_episode(double, const StateVec&, bool) override {}
    AgentStats stats() const override { return {}; }

private:
    Action tick() {
        if (left_-- <= 0) throw std::runtime_error("agent exploded");
        return 0;
    }
    int left_;
};

}  // namespace testenv
