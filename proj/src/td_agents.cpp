#include "rtrl/td_agents.hpp"

namespace rtrl {

QLearningAgent::QLearningAgent(const Environment& env, TdParams params, std::uint64_t seed)
    : disc_(env.discretizer()), params_(params), q_(env.num_actions(), 0.0), rng_(seed) {
    if (!(params.alpha > 0.0 && params.alpha <= 1.0)) throw ConfigError("q-learning: alpha must lie in (0, 1]");
    if (!(params.epsilon >= 0.0 && params.epsilon <= 1.0)) throw ConfigError("q-learning: epsilon must lie in [0, 1]");
    DiscountFactor check(params.gamma);
    (void)check;
    seed_experiences(env.jumpstart());
}

void QLearningAgent::seed_experiences(const std::vector<Experience>& xs) {
    for (const auto& e : xs) {
        learn(e);
        ++stats_.experiences_seeded;
        ++stats_.experiences_incorporated;
    }
}

void QLearningAgent::td_update(const Experience& e) {
    const double future = e.terminal ? 0.0 : q_.read(e.s_next).max_q();
    const double target = e.reward + params_.gamma * future;
    q_.update(e.s, [&](StateEntry& entry) {
        double& q = entry.values.q[e.a];
        q += params_.alpha * (target - q);
        ++entry.values.n[e.a];
        ++entry.values.visits;
    });
}

Action QLearningAgent::choose(const DiscreteState& s) {
    ++stats_.actions;
    if (params_.epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < params_.epsilon)
        return std::uniform_int_distribution<int>(0, q_.num_actions() - 1)(rng_);
    return greedy_action(q_, s, rng_);
}

Action QLearningAgent::first_action(const StateVec& x) {
    prev_s_ = disc_.discretize(x);
    prev_a_ = choose(prev_s_);
    has_prev_ = true;
    return prev_a_;
}

Action QLearningAgent::next_action(double reward, const StateVec& x) {
    const DiscreteState s = disc_.discretize(x);
    if (has_prev_) {
        learn(Experience{prev_s_, prev_a_, s, reward, false});
        ++stats_.experiences_received;
        ++stats_.experiences_incorporated;
    }
    prev_s_ = s;
    prev_a_ = choose(s);
    has_prev_ = true;
    return prev_a_;
}

void QLearningAgent::end_episode(double reward, const StateVec& x, bool terminal) {
    if (has_prev_) {
        learn(Experience{prev_s_, prev_a_, disc_.discretize(x), reward, terminal});
        ++stats_.experiences_received;
        ++stats_.experiences_incorporated;
    }
    has_prev_ = false;
}

DynaAgent::DynaAgent(const Environment& env, TdParams params, int k, std::uint64_t seed)
    : QLearningAgent(env, params, seed), k_(k) {
    if (k < 0) throw ConfigError("dyna: k must be >= 0");
    // The base constructor seeded through QLearningAgent::learn; keep the
    // jump-start transitions available for replay as well.
    for (const auto& e : env.jumpstart()) store_.push_back(e);
}

void DynaAgent::learn(const Experience& e) {
    store_.push_back(e);
    td_update(e);
    if (store_.empty()) return;
    std::uniform_int_distribution<std::size_t> pick(0, store_.size() - 1);
    for (int i = 0; i < k_; ++i) td_update(store_[pick(rng_)]);
}

}  // namespace rtrl
