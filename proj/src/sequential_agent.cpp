#include "rtrl/sequential_agent.hpp"

namespace rtrl {

PlannerKind planner_kind(const std::string& name) {
    if (name == "vi") return PlannerKind::ValueIteration;
    if (name == "mcts") return PlannerKind::Mcts;
    throw ConfigError("unknown planner '" + name + "' (expected vi or mcts)");
}

SequentialAgent::SequentialAgent(const Environment& env, ModelPtr model, PlannerKind planner, const AgentConfig& cfg)
    : disc_(env.discretizer()),
      model_(std::move(model)),
      planner_(planner),
      vf_(std::make_unique<ValueFunction>(env.num_actions(), 0.0)),
      gamma_(cfg.gamma),
      mcts_(mcts_params_for(cfg, env)),
      vi_(cfg.vi),
      budget_(cfg.plan_budget),
      rng_(cfg.seed) {
    const auto seeds = env.jumpstart();
    if (!seeds.empty()) {
        model_ = model_->update(seeds);
        stats_.experiences_seeded = seeds.size();
        stats_.experiences_incorporated = seeds.size();
        ++stats_.model_updates;
    }
}

void SequentialAgent::incorporate(const Experience& e) {
    model_ = model_->update(std::span<const Experience>(&e, 1));
    ++epoch_;
    ++stats_.experiences_received;
    ++stats_.experiences_incorporated;
    ++stats_.model_updates;
}

void SequentialAgent::plan(const DiscreteState& s) {
    if (planner_ == PlannerKind::ValueIteration) {
        last_vi_ = value_iteration(*model_, gamma_, vi_, *vf_);
    } else {
        last_rollouts_ = plan_for_budget(*model_, *vf_, s, mcts_, budget_, rng_, epoch_);
        stats_.rollouts += last_rollouts_;
    }
}

Action SequentialAgent::act(const DiscreteState& s) {
    plan(s);
    ++stats_.actions;
    prev_s_ = s;
    prev_a_ = greedy_action(*vf_, s, rng_);
    has_prev_ = true;
    return prev_a_;
}

Action SequentialAgent::first_action(const StateVec& x) { return act(disc_.discretize(x)); }

Action SequentialAgent::next_action(double reward, const StateVec& x) {
    const DiscreteState s = disc_.discretize(x);
    if (has_prev_) incorporate(Experience{prev_s_, prev_a_, s, reward, false});
    return act(s);
}

void SequentialAgent::end_episode(double reward, const StateVec& x, bool terminal) {
    if (has_prev_) incorporate(Experience{prev_s_, prev_a_, disc_.discretize(x), reward, terminal});
    has_prev_ = false;
}

}  // namespace rtrl
