#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "rtrl/environment.hpp"
#include "rtrl/forest_model.hpp"
#include "rtrl/mcts.hpp"
#include "rtrl/value_iteration.hpp"

namespace rtrl {

struct AgentStats {
    std::uint64_t experiences_received = 0;      // transitions handed to the agent by the caller
    std::uint64_t experiences_seeded = 0;        // jump-start transitions
    std::uint64_t experiences_incorporated = 0;  // in the current model (or value table)
    std::uint64_t experiences_queued = 0;        // awaiting the model learner
    std::uint64_t model_updates = 0;
    std::uint64_t rollouts = 0;
    std::uint64_t actions = 0;
};

class Agent {
public:
    virtual ~Agent() = default;

    virtual std::string name() const = 0;
    virtual Action first_action(const StateVec& s) = 0;
    virtual Action next_action(double reward, const StateVec& s) = 0;
    /// Final transition of an episode. `terminal` is false when the episode
    /// was cut by the step limit.
    virtual void end_episode(double reward, const StateVec& s, bool terminal) = 0;

    /// Background machinery, if any. Baseline agents do nothing here.
    virtual void start() {}
    virtual void stop() {}

    virtual AgentStats stats() const = 0;
    /// Experiences in the agent's current model; 0 for model-free agents.
    virtual std::size_t model_size() const { return 0; }
};

enum class Placement { SingleCore, MultiCore };

struct AgentConfig {
    std::string model = "forest";  // tabular | forest
    ForestParams forest;
    double gamma = 0.99;
    // Environment defaults are used for unset values (c, max_depth).
    std::optional<double> mcts_c;
    std::optional<int> mcts_max_depth;
    double mcts_lambda = 0.9;
    std::uint32_t stale_visit_cap = 1;
    ViParams vi;
    std::chrono::nanoseconds plan_budget = std::chrono::milliseconds(100);
    double alpha = 0.3;
    double epsilon = 0.1;
    int dyna_k = 1000;
    // Parallel agent.
    Placement placement = Placement::MultiCore;
    bool pin_threads = true;
    bool idle_priority_background = true;
    bool planning_enabled = true;
    std::chrono::milliseconds model_update_delay{0};
    std::size_t queue_warning = 10000;
    std::uint64_t seed = 1;
};

/// Model configured per `cfg.model` for the environment's grid.
ModelPtr make_model(const AgentConfig& cfg, const Environment& env);
MctsParams mcts_params_for(const AgentConfig& cfg, const Environment& env);

/// `qlearning`, `dyna`, `seq-vi`, `seq-mcts`, `rtmba`, or the `pid` reference
/// controller for the vehicle tasks.
std::unique_ptr<Agent> make_agent(const std::string& name, const Environment& env, const AgentConfig& cfg);

}  // namespace rtrl
