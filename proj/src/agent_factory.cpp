#include "rtrl/agent.hpp"
#include "rtrl/pid_agent.hpp"
#include "rtrl/rtmba_agent.hpp"
#include "rtrl/sequential_agent.hpp"
#include "rtrl/tabular_model.hpp"
#include "rtrl/td_agents.hpp"

namespace rtrl {

ModelPtr make_model(const AgentConfig& cfg, const Environment& env) {
    StateSpace space{env.discretizer().bin_counts(), env.num_actions(), env.r_max()};
    if (cfg.model == "tabular") return std::make_shared<TabularModel>(std::move(space));
    if (cfg.model == "forest") return std::make_shared<ForestModel>(std::move(space), cfg.forest);
    throw ConfigError("unknown model '" + cfg.model + "' (expected tabular or forest)");
}

MctsParams mcts_params_for(const AgentConfig& cfg, const Environment& env) {
    MctsParams p;
    // Exploration scales with the per-step reward range.
    const bool mcar = env.name() == "mcar";
    p.c = cfg.mcts_c.value_or(mcar ? 2.0 : 20.0);
    p.max_depth = cfg.mcts_max_depth.value_or(mcar ? 300 : 200);
    p.lambda = cfg.mcts_lambda;
    p.gamma = cfg.gamma;
    p.stale_visit_cap = cfg.stale_visit_cap;
    p.validate();
    return p;
}

std::unique_ptr<Agent> make_agent(const std::string& name, const Environment& env, const AgentConfig& cfg) {
    const TdParams td{cfg.alpha, cfg.epsilon, cfg.gamma};
    if (name == "qlearning") return std::make_unique<QLearningAgent>(env, td, cfg.seed);
    if (name == "dyna") return std::make_unique<DynaAgent>(env, td, cfg.dyna_k, cfg.seed);
    if (name == "seq-vi")
        return std::make_unique<SequentialAgent>(env, make_model(cfg, env), PlannerKind::ValueIteration, cfg);
    if (name == "seq-mcts")
        return std::make_unique<SequentialAgent>(env, make_model(cfg, env), PlannerKind::Mcts, cfg);
    if (name == "rtmba") return std::make_unique<RtmbaAgent>(env, make_model(cfg, env), cfg);
    if (name == "pid") {
        if (env.name() == "mcar") throw ConfigError("pid agent only drives the vehicle tasks");
        return std::make_unique<PidAgent>();
    }
    throw ConfigError("unknown agent '" + name + "' (expected qlearning, dyna, seq-vi, seq-mcts, rtmba or pid)");
}

}  // namespace rtrl
