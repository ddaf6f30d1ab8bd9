#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <vector>

#include "rtrl/model.hpp"
#include "rtrl/value_function.hpp"

namespace rtrl {

struct MctsParams {
    double c = 2.0;        // UCT exploration constant, reward units
    double lambda = 0.9;   // eligibility-trace decay of the backup target
    int max_depth = 300;
    double gamma = 0.99;
    // When a rollout touches a state whose statistics were gathered under an
    // older model, its visit counts are capped at this value so returns from
    // the new model are not drowned by stale ones. 0 disables the cap.
    std::uint32_t stale_visit_cap = 1;

    void validate() const;
};

struct RolloutStep {
    DiscreteState s;
    Action a = 0;
    double reward = 0.0;
};

struct RolloutTrace {
    std::vector<RolloutStep> steps;
    bool terminal = false;      // ended in a predicted terminal transition
    bool unknown_leaf = false;  // ended on an (s, a) the model knows nothing about
};

/// UCT action choice at one state: untried actions first (uniformly), then
/// argmax Q + c*sqrt(ln N / n) with random tie-breaking.
Action uct_select(const ActionValues& v, double c, Rng& rng);

/// One rollout from s0 followed by a lambda-return backup along its path.
///
/// Values are keyed by state alone, so a state met at several depths reads
/// and writes the same entry. Each entry is locked only while it is read for
/// selection or while its single update is applied.
RolloutTrace mcts_rollout(const Model& model, ValueFunction& vf, const DiscreteState& s0, const MctsParams& p,
                          Rng& rng, std::uint64_t model_epoch = 0);

/// Repeats mcts_rollout until `budget` of wall-clock time has elapsed or
/// `stop` becomes true. Returns the number of completed rollouts.
std::size_t plan_for_budget(const Model& model, ValueFunction& vf, const DiscreteState& s0, const MctsParams& p,
                            std::chrono::nanoseconds budget, Rng& rng, std::uint64_t model_epoch = 0,
                            const std::atomic<bool>* stop = nullptr);

}  // namespace rtrl
