#pragma once

#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "rtrl/model.hpp"

namespace rtrl {

/// Maximum-likelihood counts per (s, a): successor frequencies and mean reward.
/// Cells are shared between successive model versions and copied only when
/// a batch touches them.
class TabularModel final : public Model {
public:
    explicit TabularModel(StateSpace space);

    ModelPtr update(std::span<const Experience> batch) const override;
    Prediction predict(const DiscreteState& s, Action a) const override;
    ModelSample sample(const DiscreteState& s, Action a, Rng& rng) const override;

    const std::vector<DiscreteState>& known_states() const override { return known_order_; }
    std::size_t experience_count() const override { return experiences_; }
    const StateSpace& space() const override { return space_; }
    std::string name() const override { return "tabular"; }

    /// Number of visits to (s, a).
    std::uint64_t visits(const DiscreteState& s, Action a) const;

private:
    struct OutcomeCount {
        DiscreteState next;
        bool terminal;
        std::uint64_t count;
    };
    struct Cell {
        std::vector<OutcomeCount> outcomes;
        double reward_sum = 0.0;
        std::uint64_t visits = 0;
    };
    struct Key {
        DiscreteState s;
        Action a;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return k.s.hash() * 31u + static_cast<std::size_t>(k.a); }
    };

    const Cell* cell(const DiscreteState& s, Action a) const;

    StateSpace space_;
    std::unordered_map<Key, std::shared_ptr<const Cell>, KeyHash> cells_;
    std::vector<DiscreteState> known_order_;
    std::unordered_set<DiscreteState, DiscreteStateHash> known_;
    std::size_t experiences_ = 0;
};

}  // namespace rtrl
