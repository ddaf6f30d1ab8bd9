#pragma once

#include <memory>
#include <unordered_set>
#include <utility>

#include "rtrl/decision_tree.hpp"
#include "rtrl/model.hpp"

namespace rtrl {

struct ForestParams {
    int trees = 5;           // trees per predicted quantity
    double inclusion = 0.6;  // probability that a tree trains on a given experience
    std::uint64_t seed = 1;
};

/// Random-forest model of the discretized MDP.
///
/// One forest per state feature predicts the relative change of that feature
/// in bins, one regression forest predicts the reward and one forest predicts
/// termination. Inputs to every tree are the state's bins and the action. A
/// forest's prediction is the uniform mixture of its trained trees' leaves;
/// successor states combine the per-feature predictions independently. A
/// (s, a) is reported terminal when the terminal forest's mixture probability
/// is at least 0.5.
class ForestModel final : public Model {
public:
    using Distribution = std::vector<std::pair<int, double>>;

    ForestModel(StateSpace space, ForestParams params);

    ModelPtr update(std::span<const Experience> batch) const override;
    Prediction predict(const DiscreteState& s, Action a) const override;
    ModelSample sample(const DiscreteState& s, Action a, Rng& rng) const override;

    const std::vector<DiscreteState>& known_states() const override { return known_order_; }
    std::size_t experience_count() const override { return experiences_; }
    const StateSpace& space() const override { return space_; }
    std::string name() const override { return "forest"; }

    /// Mixture distribution over the change of feature `dim` (in bins).
    Distribution predict_feature(std::size_t dim, const DiscreteState& s, Action a) const;
    double terminal_probability(const DiscreteState& s, Action a) const;
    double expected_reward(const DiscreteState& s, Action a) const;
    /// True once every quantity has at least one trained tree.
    bool trained() const;

    const ForestParams& params() const { return params_; }
    std::size_t quantity_count() const { return forests_.size(); }
    std::size_t reward_quantity() const { return space_.bins.size(); }
    std::size_t terminal_quantity() const { return space_.bins.size() + 1; }
    const DecisionTree& tree(std::size_t quantity, int t) const { return *forests_[quantity][t]; }

private:
    using Inputs = std::array<std::int16_t, kMaxInputs>;
    Inputs inputs(const DiscreteState& s, Action a) const;
    bool included(std::size_t quantity, int tree, std::size_t experience_index) const;

    StateSpace space_;
    ForestParams params_;
    std::vector<std::vector<std::shared_ptr<const DecisionTree>>> forests_;
    std::vector<std::vector<int>> trained_;  // indices of trained trees per quantity
    std::vector<DiscreteState> known_order_;
    std::unordered_set<DiscreteState, DiscreteStateHash> known_;
    std::size_t experiences_ = 0;
};

}  // namespace rtrl
