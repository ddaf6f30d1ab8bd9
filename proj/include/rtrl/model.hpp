#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rtrl/types.hpp"

namespace rtrl {

/// One possible outcome of taking an action.
struct Outcome {
    DiscreteState next;
    bool terminal = false;
    double prob = 0.0;
};

struct Prediction {
    std::vector<Outcome> outcomes;  // sums to 1 when known
    double reward = 0.0;            // expected immediate reward
    bool known = false;
};

struct ModelSample {
    DiscreteState next;
    double reward = 0.0;
    bool terminal = false;
    bool known = false;
};

/// Grid the model works on: number of features, bins per feature and actions.
struct StateSpace {
    std::vector<int> bins;
    int num_actions = 0;
    double r_max = 0.0;  // optimistic reward reported for unknown (s, a)

    DiscreteState clamp(DiscreteState s) const;
};

/// Learned MDP model. Instances are immutable once built: update() returns a
/// new instance and leaves the receiver untouched, so readers holding the old
/// instance keep seeing consistent predictions while a successor is built.
class Model {
public:
    virtual ~Model() = default;

    virtual std::shared_ptr<const Model> update(std::span<const Experience> batch) const = 0;
    virtual Prediction predict(const DiscreteState& s, Action a) const = 0;
    virtual ModelSample sample(const DiscreteState& s, Action a, Rng& rng) const = 0;

    /// States the model has observed as a source state, in first-seen order.
    virtual const std::vector<DiscreteState>& known_states() const = 0;
    /// Number of experiences incorporated so far.
    virtual std::size_t experience_count() const = 0;
    virtual const StateSpace& space() const = 0;
    virtual std::string name() const = 0;

    int num_actions() const { return space().num_actions; }

protected:
    /// Optimistic default for unknown (s, a): self loop with reward r_max.
    ModelSample unknown_sample(const DiscreteState& s) const {
        return ModelSample{s, space().r_max, false, false};
    }
};

using ModelPtr = std::shared_ptr<const Model>;

}  // namespace rtrl
