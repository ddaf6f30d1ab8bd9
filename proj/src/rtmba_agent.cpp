#include "rtrl/rtmba_agent.hpp"

#include <pthread.h>
#include <sched.h>

#include <iostream>

namespace rtrl {

RtmbaAgent::RtmbaAgent(const Environment& env, ModelPtr model, const AgentConfig& cfg)
    : disc_(env.discretizer()),
      mcts_(mcts_params_for(cfg, env)),
      cfg_(cfg),
      vf_(env.num_actions(), 0.0),
      model_(std::move(model)),
      action_rng_(cfg.seed),
      planner_rng_(cfg.seed ^ 0x9e3779b97f4a7c15ULL) {
    const auto seeds = env.jumpstart();
    if (!seeds.empty()) {
        model_ = model_->update(seeds);
        seeded_ = seeds.size();
        incorporated_ = seeds.size();
        model_updates_ = 1;
    }
}

RtmbaAgent::~RtmbaAgent() {
    if (running_.load()) stop();
}

void RtmbaAgent::place_thread(std::thread& t, int cpu, bool idle) {
    const pthread_t h = t.native_handle();
    if (idle) {
        sched_param sp{};
        sp.sched_priority = 0;
        pthread_setschedparam(h, SCHED_IDLE, &sp);
    }
    if (cpu >= 0) {
        cpu_set_t set;
        CPU_ZERO(&set);
        CPU_SET(cpu, &set);
        pthread_setaffinity_np(h, sizeof(set), &set);
    }
}

void RtmbaAgent::start() {
    if (running_.load()) throw LifecycleError("rtmba: start called twice");
    if (started_once_) throw LifecycleError("rtmba: agent cannot be restarted after stop");
    started_once_ = true;
    stop_.store(false);
    running_.store(true);

    const unsigned cores = std::thread::hardware_concurrency();
    int learner_cpu = -1;
    int planner_cpu = -1;
    if (cfg_.pin_threads) {
        if (cfg_.placement == Placement::SingleCore) {
            learner_cpu = planner_cpu = 0;
            cpu_set_t set;
            CPU_ZERO(&set);
            CPU_SET(0, &set);
            pthread_setaffinity_np(pthread_self(), sizeof(set), &set);
            pinned_cpus_ = 1;
        } else if (cores >= 3) {
            learner_cpu = 1;
            planner_cpu = 2;
            pinned_cpus_ = 2;
        }
    }

    learner_ = std::thread([this] { learner_loop(); });
    place_thread(learner_, learner_cpu, cfg_.idle_priority_background);
    if (cfg_.planning_enabled) {
        planner_ = std::thread([this] { planner_loop(); });
        place_thread(planner_, planner_cpu, cfg_.idle_priority_background);
    }
}

void RtmbaAgent::stop() {
    if (!running_.load()) throw LifecycleError("rtmba: stop called before start");
    {
        std::lock_guard lock(list_mu_);
        stop_.store(true);
    }
    list_cv_.notify_all();
    {
        std::lock_guard lock(pause_mu_);
    }
    pause_cv_.notify_all();
    if (planner_.joinable()) planner_.join();
    if (learner_.joinable()) learner_.join();
    running_.store(false);
}

void RtmbaAgent::enqueue(const Experience& e) {
    bool warn = false;
    {
        std::lock_guard lock(list_mu_);
        lock_audit::require_held(LockClass::UpdateList);
        list_.push_back(e);
        ++received_;
        if (list_.size() >= cfg_.queue_warning && !queue_warned_) warn = queue_warned_ = true;
    }
    list_cv_.notify_one();
    if (warn) std::cerr << "rtmba: update list exceeded " << cfg_.queue_warning << " entries\n";
}

void RtmbaAgent::set_current(const DiscreteState& s) {
    std::lock_guard lock(state_mu_);
    lock_audit::require_held(LockClass::CurrentState);
    current_ = s;
}

Action RtmbaAgent::act(const DiscreteState& s) {
    set_current(s);
    const Action a = greedy_action(vf_, s, action_rng_);
    actions_.fetch_add(1, std::memory_order_relaxed);
    prev_s_ = s;
    prev_a_ = a;
    has_prev_ = true;
    return a;
}

Action RtmbaAgent::first_action(const StateVec& x) {
    if (!running_.load()) throw LifecycleError("rtmba: first_action before start");
    has_prev_ = false;
    return act(disc_.discretize(x));
}

Action RtmbaAgent::next_action(double reward, const StateVec& x) {
    if (!running_.load()) throw LifecycleError("rtmba: next_action before start");
    const DiscreteState s = disc_.discretize(x);
    if (has_prev_) enqueue(Experience{prev_s_, prev_a_, s, reward, false});
    return act(s);
}

void RtmbaAgent::end_episode(double reward, const StateVec& x, bool terminal) {
    if (has_prev_) enqueue(Experience{prev_s_, prev_a_, disc_.discretize(x), reward, terminal});
    has_prev_ = false;
}

std::size_t RtmbaAgent::model_learning_iteration(bool wait) {
    std::lock_guard builder(learner_mu_);
    std::vector<Experience> batch;
    {
        std::unique_lock lock(list_mu_);
        if (wait) list_cv_.wait(lock, [&] { return !list_.empty() || stop_.load(); });
        lock_audit::require_held(LockClass::UpdateList);
        batch.assign(list_.begin(), list_.end());
        list_.clear();
        in_flight_ += batch.size();
    }
    if (batch.empty()) return 0;

    if (cfg_.model_update_delay.count() > 0) std::this_thread::sleep_for(cfg_.model_update_delay);

    ModelPtr base;
    {
        std::lock_guard lock(model_mu_);
        lock_audit::require_held(LockClass::Model);
        base = model_;
    }
    ModelPtr next = base->update(batch);
    {
        std::lock_guard lock(model_mu_);
        lock_audit::require_held(LockClass::Model);
        model_ = std::move(next);
        ++epoch_;
    }
    {
        std::lock_guard lock(list_mu_);
        lock_audit::require_held(LockClass::UpdateList);
        in_flight_ -= batch.size();
        incorporated_ += batch.size();
    }
    model_updates_.fetch_add(1, std::memory_order_relaxed);
    return batch.size();
}

void RtmbaAgent::learner_loop() {
    while (!stop_.load()) model_learning_iteration(true);
    // Flush what the action thread queued before stop.
    while (model_learning_iteration(false) > 0) {
    }
}

std::size_t RtmbaAgent::planning_iteration() {
    std::optional<DiscreteState> root;
    {
        std::lock_guard lock(state_mu_);
        lock_audit::require_held(LockClass::CurrentState);
        root = current_;
    }
    if (!root) return 0;
    ModelPtr model;
    std::uint64_t epoch = 0;
    {
        std::lock_guard lock(model_mu_);
        lock_audit::require_held(LockClass::Model);
        model = model_;
        epoch = epoch_;
    }
    mcts_rollout(*model, vf_, *root, mcts_, planner_rng_, epoch);
    rollouts_.fetch_add(1, std::memory_order_relaxed);
    return 1;
}

void RtmbaAgent::set_planning_paused(bool paused) {
    {
        std::lock_guard lock(pause_mu_);
        paused_ = paused;
    }
    pause_cv_.notify_all();
}

void RtmbaAgent::planner_loop() {
    while (!stop_.load(std::memory_order_relaxed)) {
        {
            std::unique_lock lock(pause_mu_);
            pause_cv_.wait(lock, [&] { return !paused_ || stop_.load(); });
        }
        if (planning_iteration() == 0) std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
}

AgentStats RtmbaAgent::stats() const {
    AgentStats st;
    {
        std::lock_guard lock(list_mu_);
        st.experiences_received = received_;
        st.experiences_incorporated = incorporated_;
        st.experiences_queued = list_.size() + in_flight_;
    }
    st.experiences_seeded = seeded_;
    st.model_updates = model_updates_.load();
    st.rollouts = rollouts_.load();
    st.actions = actions_.load();
    return st;
}

ModelPtr RtmbaAgent::published_model() const {
    std::lock_guard lock(model_mu_);
    return model_;
}

std::uint64_t RtmbaAgent::model_epoch() const {
    std::lock_guard lock(model_mu_);
    return epoch_;
}

std::size_t RtmbaAgent::model_size() const { return published_model()->experience_count(); }

std::optional<DiscreteState> RtmbaAgent::current_state() const {
    std::lock_guard lock(state_mu_);
    return current_;
}

}  // namespace rtrl
