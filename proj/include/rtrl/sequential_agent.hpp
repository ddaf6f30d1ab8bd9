#pragma once

#include "rtrl/agent.hpp"

namespace rtrl {

enum class PlannerKind { ValueIteration, Mcts };

PlannerKind planner_kind(const std::string& name);  // "vi" | "mcts"

/// Model-based agent that, inside every call, first folds the new transition
/// into its model and then re-plans (value iteration to convergence, or MCTS
/// for a fixed wall-clock budget) before acting greedily.
class SequentialAgent final : public Agent {
public:
    SequentialAgent(const Environment& env, ModelPtr model, PlannerKind planner, const AgentConfig& cfg);

    std::string name() const override { return planner_ == PlannerKind::ValueIteration ? "seq-vi" : "seq-mcts"; }
    Action first_action(const StateVec& s) override;
    Action next_action(double reward, const StateVec& s) override;
    void end_episode(double reward, const StateVec& s, bool terminal) override;
    AgentStats stats() const override { return stats_; }
    std::size_t model_size() const override { return model_->experience_count(); }

    const Model& model() const { return *model_; }
    const ValueFunction& values() const { return *vf_; }
    const ViReport& last_vi_report() const { return last_vi_; }
    std::size_t last_rollouts() const { return last_rollouts_; }

    /// Runs the planner at s without acting.
    void plan(const DiscreteState& s);

private:
    void incorporate(const Experience& e);
    Action act(const DiscreteState& s);

    Discretizer disc_;
    ModelPtr model_;
    PlannerKind planner_;
    std::unique_ptr<ValueFunction> vf_;
    DiscountFactor gamma_;
    MctsParams mcts_;
    ViParams vi_;
    std::chrono::nanoseconds budget_;
    Rng rng_;
    std::uint64_t epoch_ = 1;
    DiscreteState prev_s_;
    Action prev_a_ = 0;
    bool has_prev_ = false;
    ViReport last_vi_;
    std::size_t last_rollouts_ = 0;
    AgentStats stats_;
};

}  // namespace rtrl
