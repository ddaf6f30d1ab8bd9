#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rtrl/discretizer.hpp"
#include "rtrl/types.hpp"

namespace rtrl {

struct StepResult {
    StateVec next_state;
    double reward = 0.0;
    bool terminal = false;   // absorbing goal state reached
    bool truncated = false;  // episode cut by the step limit; not a property of the MDP
};

/// Episodic task stepped by the harness. Implementations are deterministic
/// given the reset rng and the action sequence.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string name() const = 0;
    virtual StateVec reset(Rng& rng) = 0;
    virtual StepResult step(Action a) = 0;
    virtual StateVec state() const = 0;

    virtual int num_actions() const = 0;
    virtual const Discretizer& discretizer() const = 0;
    virtual std::vector<std::string> feature_names() const = 0;
    /// Maximum steps per episode.
    virtual int horizon() const = 0;
    /// Largest reward the task can pay; unknown transitions are valued with it.
    virtual double r_max() const = 0;
    virtual double r_min() const = 0;
    /// Action the environment applies when the agent misses a tick deadline.
    /// `last_applied` is negative before the first action of an episode.
    virtual Action hold_action(Action last_applied) const = 0;
    /// Transitions seeded into models before learning starts.
    virtual std::vector<Experience> jumpstart() const { return {}; }
};

/// `mcar`, `car2to7` or `carrandom`.
std::unique_ptr<Environment> make_environment(const std::string& name);

}  // namespace rtrl
