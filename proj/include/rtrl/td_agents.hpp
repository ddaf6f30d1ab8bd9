#pragma once

#include <vector>

#include "rtrl/agent.hpp"
#include "rtrl/value_function.hpp"

namespace rtrl {

struct TdParams {
    double alpha = 0.3;
    double epsilon = 0.1;
    double gamma = 0.99;
};

/// Tabular Q-learning with a fixed epsilon-greedy behaviour policy.
class QLearningAgent : public Agent {
public:
    QLearningAgent(const Environment& env, TdParams params, std::uint64_t seed);

    std::string name() const override { return "qlearning"; }
    Action first_action(const StateVec& s) override;
    Action next_action(double reward, const StateVec& s) override;
    void end_episode(double reward, const StateVec& s, bool terminal) override;
    AgentStats stats() const override { return stats_; }

    const ValueFunction& values() const { return q_; }
    /// Q(s,a) += alpha * (target - Q(s,a)); target is r for terminal transitions.
    void td_update(const Experience& e);

protected:
    virtual void learn(const Experience& e) { td_update(e); }
    void seed_experiences(const std::vector<Experience>& xs);
    Action choose(const DiscreteState& s);

    Discretizer disc_;
    TdParams params_;
    ValueFunction q_;
    Rng rng_;
    DiscreteState prev_s_;
    Action prev_a_ = 0;
    bool has_prev_ = false;
    AgentStats stats_;
};

/// Q-learning plus k replayed backups on uniformly drawn stored experiences
/// after every real step.
class DynaAgent final : public QLearningAgent {
public:
    DynaAgent(const Environment& env, TdParams params, int k, std::uint64_t seed);

    std::string name() const override { return "dyna"; }
    std::size_t stored() const { return store_.size(); }

protected:
    void learn(const Experience& e) override;

private:
    int k_;
    std::vector<Experience> store_;
};

}  // namespace rtrl
