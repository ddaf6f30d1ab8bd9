#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <optional>
#include <stdexcept>
#include <thread>

#include "rtrl/agent.hpp"
#include "rtrl/lock_audit.hpp"

namespace rtrl {

struct LifecycleError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Parallel model-based agent.
///
/// The caller's thread is the action thread. start() launches a model
/// learning thread and a planning thread. The four shared variables each
/// have their own lock class and no thread ever holds two of them:
///   update list     <- UpdateListMutex   (action appends, learner drains)
///   current state   <- CurrentStateMutex (action writes, planner reads)
///   Q(s, .)         <- one PolicyMutex per state (inside ValueFunction)
///   published model <- ModelMutex        (learner swaps, planner copies)
class RtmbaAgent final : public Agent {
public:
    RtmbaAgent(const Environment& env, ModelPtr model, const AgentConfig& cfg);
    ~RtmbaAgent() override;

    RtmbaAgent(const RtmbaAgent&) = delete;
    RtmbaAgent& operator=(const RtmbaAgent&) = delete;

    std::string name() const override { return "rtmba"; }
    Action first_action(const StateVec& s) override;
    Action next_action(double reward, const StateVec& s) override;
    void end_episode(double reward, const StateVec& s, bool terminal) override;

    void start() override;
    /// Signals both loops, lets the learner incorporate whatever is still
    /// queued and joins. Safe to call from any thread but the two it joins.
    void stop() override;
    bool running() const { return running_.load(); }
    /// Suspends the planning loop until resumed or stopped. Used to keep an
    /// idle agent from competing for the CPU, for example between episodes.
    void set_planning_paused(bool paused);

    AgentStats stats() const override;
    std::size_t model_size() const override;

    /// One pass of the learner loop: drains the list, builds the successor
    /// model off-lock and publishes it. With `wait` the call sleeps until an
    /// experience arrives or stop is requested. Returns the drained count.
    std::size_t model_learning_iteration(bool wait);
    /// One rollout from the shared current state. Returns 0 if no state has
    /// been observed yet.
    std::size_t planning_iteration();

    ModelPtr published_model() const;
    std::uint64_t model_epoch() const;
    std::optional<DiscreteState> current_state() const;
    const ValueFunction& values() const { return vf_; }
    ValueFunction& values() { return vf_; }
    const MctsParams& mcts_params() const { return mcts_; }
    /// Number of distinct CPUs the background threads were pinned to (0: not pinned).
    int pinned_cpus() const { return pinned_cpus_; }

private:
    void enqueue(const Experience& e);
    void set_current(const DiscreteState& s);
    Action act(const DiscreteState& s);
    void learner_loop();
    void planner_loop();
    void place_thread(std::thread& t, int cpu, bool idle);

    Discretizer disc_;
    MctsParams mcts_;
    AgentConfig cfg_;
    ValueFunction vf_;

    mutable UpdateListMutex list_mu_;
    std::condition_variable_any list_cv_;
    std::deque<Experience> list_;
    std::uint64_t in_flight_ = 0;      // drained, not yet published
    std::uint64_t incorporated_ = 0;   // published, including seeds
    std::uint64_t received_ = 0;
    bool queue_warned_ = false;

    mutable CurrentStateMutex state_mu_;
    std::optional<DiscreteState> current_;

    mutable ModelMutex model_mu_;
    ModelPtr model_;
    std::uint64_t epoch_ = 1;

    std::mutex pause_mu_;  // control flag only, never held with a class lock
    std::condition_variable pause_cv_;
    bool paused_ = false;

    std::mutex learner_mu_;  // serialises model builders; never a contended path

    // Action-thread private state.
    Rng action_rng_;
    DiscreteState prev_s_;
    Action prev_a_ = 0;
    bool has_prev_ = false;

    std::uint64_t seeded_ = 0;
    std::atomic<std::uint64_t> model_updates_{0};
    std::atomic<std::uint64_t> rollouts_{0};
    std::atomic<std::uint64_t> actions_{0};

    Rng planner_rng_;
    std::atomic<bool> stop_{false};
    std::atomic<bool> running_{false};
    bool started_once_ = false;
    std::thread learner_;
    std::thread planner_;
    int pinned_cpus_ = 0;
};

}  // namespace rtrl
