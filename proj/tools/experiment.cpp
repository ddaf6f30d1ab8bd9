// Command-line front end: runs one experiment and writes its CSV files.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rtrl/harness.hpp"

int main(int argc, char** argv) {
    using namespace rtrl;

    CLI::App app{"Real-time model-based RL experiment runner"};
    app.set_config("--config", "", "TOML/INI file; keys mirror the long flag names");
    app.allow_config_extras(false);

    ExperimentConfig cfg;
    AgentConfig& ac = cfg.agent_cfg;
    std::optional<double> rate;
    std::optional<std::string> mode;
    std::string out = cfg.out.string();
    double plan_budget_ms = 100.0;
    int update_delay_ms = 0;
    std::string placement = "multi";
    bool no_pin = false, no_idle = false, no_planning = false, no_timing = false, no_steps = false;
    bool quiet = false, print_config = false;

    app.add_option("--agent", cfg.agent, "qlearning | dyna | seq-vi | seq-mcts | rtmba | pid")
        ->check(CLI::IsMember({"qlearning", "dyna", "seq-vi", "seq-mcts", "rtmba", "pid"}));
    app.add_option("--env", cfg.env, "mcar | car2to7 | carrandom")
        ->check(CLI::IsMember({"mcar", "car2to7", "carrandom"}));
    app.add_option("--actrate", rate, "Action rate in Hz (default 25 for mcar, 20 for the vehicle)")
        ->check(CLI::PositiveNumber);
    app.add_option("--episodes", cfg.episodes, "Episodes per trial")->check(CLI::PositiveNumber);
    app.add_option("--trials", cfg.trials, "Trials; trial t uses seed + t")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Base seed");
    app.add_option("--mode", mode, "wait | realtime (default wait for mcar, realtime for the vehicle)")
        ->check(CLI::IsMember({"wait", "realtime"}));
    app.add_option("--out", out, "Output directory");

    app.add_option("--model", ac.model, "tabular | forest")->check(CLI::IsMember({"tabular", "forest"}));
    app.add_option("--trees", ac.forest.trees, "Trees per forest")->check(CLI::PositiveNumber);
    app.add_option("--inclusion", ac.forest.inclusion, "Per-tree sample inclusion probability")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--forest-seed", ac.forest.seed, "Forest seed");
    app.add_option("--gamma", ac.gamma, "Discount factor in (0, 1)");
    app.add_option("--mcts-c", ac.mcts_c, "UCT exploration constant");
    app.add_option("--mcts-depth", ac.mcts_max_depth, "Rollout depth limit");
    app.add_option("--lambda", ac.mcts_lambda, "Rollout backup trace decay")->check(CLI::Range(0.0, 1.0));
    app.add_option("--stale-cap", ac.stale_visit_cap, "Visit cap applied to statistics from older models (0 = off)");
    app.add_option("--plan-budget-ms", plan_budget_ms, "seq-mcts planning time per action")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--vi-epsilon", ac.vi.epsilon, "Value iteration residual threshold");
    app.add_option("--vi-max-sweeps", ac.vi.max_sweeps, "Value iteration sweep limit");
    app.add_option("--alpha", ac.alpha, "Q-learning / Dyna step size");
    app.add_option("--epsilon", ac.epsilon, "Q-learning / Dyna exploration rate");
    app.add_option("--dyna-k", ac.dyna_k, "Replayed updates per step")->check(CLI::NonNegativeNumber);
    app.add_option("--placement", placement, "rtmba thread placement: single | multi")
        ->check(CLI::IsMember({"single", "multi"}));
    app.add_flag("--no-pin", no_pin, "Do not pin rtmba background threads");
    app.add_flag("--no-idle-priority", no_idle, "Run rtmba background threads at normal priority");
    app.add_flag("--no-planning", no_planning, "Disable the rtmba planning thread");
    app.add_option("--model-update-delay-ms", update_delay_ms, "Artificial delay inside each model update")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--queue-warning", ac.queue_warning, "Update list size that triggers a warning");
    app.add_flag("--no-timing", no_timing, "Leave timing columns empty (byte-comparable wait-mode output)");
    app.add_flag("--no-steps", no_steps, "Skip the per-step CSV files");
    app.add_flag("-q,--quiet", quiet, "No per-episode progress");
    app.add_flag("--print-config", print_config, "Print the effective configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (print_config) {
        std::cout << app.config_to_str(true, false);
        return 0;
    }

    const bool vehicle_env = cfg.env != "mcar";
    cfg.rate_hz = rate.value_or(vehicle_env ? 20.0 : 25.0);
    try {
        cfg.mode = pacing_mode(mode.value_or(vehicle_env ? "realtime" : "wait"));
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    cfg.out = out;
    cfg.record_timing = !no_timing;
    cfg.write_steps = !no_steps;
    ac.plan_budget = std::chrono::nanoseconds(static_cast<std::int64_t>(plan_budget_ms * 1e6));
    ac.model_update_delay = std::chrono::milliseconds(update_delay_ms);
    ac.placement = placement == "single" ? Placement::SingleCore : Placement::MultiCore;
    ac.pin_threads = !no_pin;
    ac.idle_priority_background = !no_idle;
    ac.planning_enabled = !no_planning;

    try {
        const auto result = run_experiment(cfg, quiet ? nullptr : &std::cerr);
        int failed = 0;
        for (const auto& t : result.trials) {
            const auto& st = t.stats;
            std::cerr << "trial seed " << t.seed << ": generated " << t.experiences_generated << ", incorporated "
                      << st.experiences_incorporated - st.experiences_seeded << ", queued " << st.experiences_queued
                      << ", rollouts " << st.rollouts << ", model updates " << st.model_updates << '\n';
            if (t.failed) {
                ++failed;
                std::cerr << "trial seed " << t.seed << " aborted: " << t.error << '\n';
            }
        }
        std::cout << result.summary_csv.string() << '\n';
        return failed == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
