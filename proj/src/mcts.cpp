#include "rtrl/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtrl/bellman.hpp"

namespace rtrl {

void MctsParams::validate() const {
    if (!(c >= 0.0)) throw ConfigError("mcts: exploration constant must be >= 0");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("mcts: lambda must lie in [0, 1]");
    if (max_depth < 1) throw ConfigError("mcts: max_depth must be >= 1");
    DiscountFactor check(gamma);
    (void)check;
}

namespace {

void refresh(StateEntry& e, std::uint64_t epoch, std::uint32_t cap) {
    if (e.epoch == epoch) return;
    e.epoch = epoch;
    if (cap == 0) return;
    std::uint64_t total = 0;
    for (int a = 0; a < e.values.num_actions; ++a) {
        e.values.n[a] = std::min(e.values.n[a], cap);
        total += e.values.n[a];
    }
    e.values.visits = total;
}

}  // namespace

Action uct_select(const ActionValues& v, double c, Rng& rng) {
    int untried = 0;
    Action pick = 0;
    for (int a = 0; a < v.num_actions; ++a) {
        if (v.n[a] == 0) {
            ++untried;
            if (std::uniform_int_distribution<int>(0, untried - 1)(rng) == 0) pick = a;
        }
    }
    if (untried > 0) return pick;

    const double log_n = std::log(static_cast<double>(std::max<std::uint64_t>(v.visits, 1)));
    double best = -std::numeric_limits<double>::infinity();
    int ties = 0;
    for (int a = 0; a < v.num_actions; ++a) {
        const double score = v.q[a] + c * std::sqrt(log_n / v.n[a]);
        if (score > best) {
            best = score;
            pick = a;
            ties = 1;
        } else if (score == best) {
            ++ties;
            if (std::uniform_int_distribution<int>(0, ties - 1)(rng) == 0) pick = a;
        }
    }
    return pick;
}

RolloutTrace mcts_rollout(const Model& model, ValueFunction& vf, const DiscreteState& s0, const MctsParams& p,
                          Rng& rng, std::uint64_t model_epoch) {
    RolloutTrace trace;
    trace.steps.reserve(static_cast<std::size_t>(std::min(p.max_depth, 512)));
    const DiscountFactor gamma(p.gamma);

    DiscreteState s = s0;
    for (int depth = 0; depth < p.max_depth; ++depth) {
        ActionValues snapshot;
        vf.update(s, [&](StateEntry& e) {
            refresh(e, model_epoch, p.stale_visit_cap);
            snapshot = e.values;
        });
        const Action a = uct_select(snapshot, p.c, rng);
        const ModelSample smp = model.sample(s, a, rng);
        trace.steps.push_back({s, a, smp.reward});
        if (!smp.known) {
            trace.unknown_leaf = true;
            break;
        }
        if (smp.terminal) {
            trace.terminal = true;
            break;
        }
        s = smp.next;
    }

    double leaf = 0.0;
    if (trace.unknown_leaf)
        leaf = optimistic_value(model.space(), gamma);
    else if (!trace.terminal)
        leaf = vf.read(s).max_q();

    double ret = leaf;
    double next_value = leaf;
    for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
        ret = it->reward + p.gamma * ((1.0 - p.lambda) * next_value + p.lambda * ret);
        const Action a = it->a;
        vf.update(it->s, [&](StateEntry& e) {
            refresh(e, model_epoch, p.stale_visit_cap);
            ActionValues& v = e.values;
            ++v.n[a];
            ++v.visits;
            v.q[a] += (ret - v.q[a]) / static_cast<double>(v.n[a]);
            next_value = v.max_q();
        });
    }
    return trace;
}

std::size_t plan_for_budget(const Model& model, ValueFunction& vf, const DiscreteState& s0, const MctsParams& p,
                            std::chrono::nanoseconds budget, Rng& rng, std::uint64_t model_epoch,
                            const std::atomic<bool>* stop) {
    using Clock = std::chrono::steady_clock;
    if (budget <= std::chrono::nanoseconds::zero()) return 0;
    const auto deadline = Clock::now() + budget;
    std::size_t count = 0;
    while (Clock::now() < deadline) {
        if (stop && stop->load(std::memory_order_relaxed)) break;
        mcts_rollout(model, vf, s0, p, rng, model_epoch);
        ++count;
    }
    return count;
}

}  // namespace rtrl
