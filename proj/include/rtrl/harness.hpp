#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rtrl/agent.hpp"
#include "rtrl/environment.hpp"

namespace rtrl {

enum class PacingMode { Wait, Realtime };

PacingMode pacing_mode(const std::string& name);  // "wait" | "realtime"
std::string to_string(PacingMode m);

inline constexpr const char* kStepSchema = "#schema rtrl-steps v1";
inline constexpr const char* kSummarySchema = "#schema rtrl-summary v1";
inline constexpr const char* kEpisodeSchema = "#schema rtrl-episodes v1";

struct ExperimentConfig {
    std::string agent = "rtmba";
    std::string env = "mcar";
    double rate_hz = 25.0;  // deadline is 1/rate in both modes
    int episodes = 50;
    int trials = 5;
    std::uint64_t seed = 1;
    PacingMode mode = PacingMode::Wait;
    std::filesystem::path out = "results";
    AgentConfig agent_cfg;
    // When false the timing columns (t_wall_s, latency_us, deadline_met) are
    // left empty so that wait-mode step files compare byte for byte.
    bool record_timing = true;
    bool write_steps = true;

    void validate() const;
    std::chrono::nanoseconds period() const;
};

struct StepRecord {
    double t_wall_s = 0.0;  // since episode start
    StateVec state;         // state the action was chosen for
    Action action = 0;      // action applied by the environment
    double reward = 0.0;
    double latency_us = 0.0;
    bool deadline_met = true;
};

struct EpisodeLog {
    std::vector<StepRecord> steps;
    double total_reward = 0.0;
    double wall_s = 0.0;
    bool terminal = false;
    bool truncated = false;
    bool failed = false;
    std::string error;
    std::size_t model_size = 0;  // after the episode
    std::size_t late_actions = 0;
    std::uint64_t delivered = 0;  // transitions handed to the agent
    // Duration of every completed action call, including late answers that
    // realtime mode discarded; step latencies of late steps stop at the tick.
    std::vector<double> call_latencies_us;

    int step_count() const { return static_cast<int>(steps.size()); }
};

/// Runs one episode. Wait mode steps the environment as soon as the agent
/// answers. Realtime mode ticks every 1/rate seconds; the agent is driven
/// from a separate action thread and if its answer for a tick is not back by
/// the next tick the environment applies its hold action and the late answer
/// is dropped. Agent exceptions abort the episode and mark it failed.
EpisodeLog run_episode(Environment& env, Agent& agent, const ExperimentConfig& cfg, Rng& env_rng);

struct DeadlineStats {
    double p50 = 0.0;
    double p99 = 0.0;
    double p999 = 0.0;
    double max = 0.0;
    double met_fraction = 0.0;
};

/// Nearest-rank order statistics: the p-quantile of n values is the
/// ceil(p*n)-th smallest.
double nearest_rank(std::vector<double> values, double p);
DeadlineStats deadline_stats(const EpisodeLog& log);
DeadlineStats deadline_stats(const std::vector<double>& latencies_us, std::size_t met, std::size_t steps);

/// Element i is the mean of elements max(0, i-w+1) .. i.
std::vector<double> sliding_window_avg(const std::vector<double>& series, int w);

struct MeanCi {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};
/// Mean with a two-sided 95% Student-t interval; degenerate for one sample.
MeanCi mean_ci95(const std::vector<double>& xs);

struct EpisodeSummary {
    double total_reward = 0.0;
    int steps = 0;
    double wall_s = 0.0;
    bool terminal = false;
    bool failed = false;
    std::size_t model_size = 0;
    DeadlineStats deadlines;
};

struct TrialResult {
    std::uint64_t seed = 0;
    std::vector<EpisodeSummary> episodes;
    AgentStats stats;
    std::uint64_t experiences_generated = 0;  // transitions the harness produced
    bool failed = false;
    std::string error;
};

struct ExperimentResult {
    std::vector<TrialResult> trials;
    std::filesystem::path summary_csv;
};

/// Creates a fresh environment and agent per trial (seed + trial index),
/// runs the episodes and writes steps_trial<t>.csv, episodes.csv and
/// summary.csv under cfg.out. Throws ConfigError if the output directory
/// cannot be created or written.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* progress = nullptr);

/// Per-episode mean over trials with its 95% interval, and mean steps.
struct SummaryRow {
    int episode = 0;
    MeanCi reward;
    double mean_steps = 0.0;
};
std::vector<SummaryRow> summarize(const ExperimentResult& r);

}  // namespace rtrl
