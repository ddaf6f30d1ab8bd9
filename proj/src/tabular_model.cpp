#include "rtrl/tabular_model.hpp"

#include <algorithm>
#include <cmath>

namespace rtrl {

DiscreteState StateSpace::clamp(DiscreteState s) const {
    for (std::size_t i = 0; i < bins.size() && i < s.dims(); ++i) s.set(i, std::clamp(s[i], 0, bins[i] - 1));
    return s;
}

TabularModel::TabularModel(StateSpace space) : space_(std::move(space)) {
    if (space_.num_actions < 1 || space_.num_actions > kMaxActions)
        throw ConfigError("tabular model: action count out of range");
}

ModelPtr TabularModel::update(std::span<const Experience> batch) const {
    auto next = std::make_shared<TabularModel>(*this);
    std::unordered_map<Key, std::shared_ptr<Cell>, KeyHash> touched;
    for (const Experience& e : batch) {
        if (!std::isfinite(e.reward)) throw ConfigError("tabular model: non-finite reward");
        const Key key{e.s, e.a};
        auto& fresh = touched[key];
        if (!fresh) {
            auto it = next->cells_.find(key);
            fresh = it == next->cells_.end() ? std::make_shared<Cell>() : std::make_shared<Cell>(*it->second);
        }
        auto out = std::find_if(fresh->outcomes.begin(), fresh->outcomes.end(), [&](const OutcomeCount& o) {
            return o.terminal == e.terminal && o.next == e.s_next;
        });
        if (out == fresh->outcomes.end())
            fresh->outcomes.push_back({e.s_next, e.terminal, 1});
        else
            ++out->count;
        fresh->reward_sum += e.reward;
        ++fresh->visits;
        if (next->known_.insert(e.s).second) next->known_order_.push_back(e.s);
        ++next->experiences_;
    }
    for (auto& [key, c] : touched) next->cells_[key] = std::move(c);
    return next;
}

const TabularModel::Cell* TabularModel::cell(const DiscreteState& s, Action a) const {
    auto it = cells_.find(Key{s, a});
    return it == cells_.end() ? nullptr : it->second.get();
}

std::uint64_t TabularModel::visits(const DiscreteState& s, Action a) const {
    const Cell* c = cell(s, a);
    return c ? c->visits : 0;
}

Prediction TabularModel::predict(const DiscreteState& s, Action a) const {
    Prediction p;
    const Cell* c = cell(s, a);
    if (!c || c->visits == 0) {
        p.outcomes.push_back({s, false, 1.0});
        p.reward = space_.r_max;
        return p;
    }
    const double n = static_cast<double>(c->visits);
    p.known = true;
    p.reward = c->reward_sum / n;
    p.outcomes.reserve(c->outcomes.size());
    for (const auto& o : c->outcomes) p.outcomes.push_back({o.next, o.terminal, o.count / n});
    return p;
}

ModelSample TabularModel::sample(const DiscreteState& s, Action a, Rng& rng) const {
    const Cell* c = cell(s, a);
    if (!c || c->visits == 0) return unknown_sample(s);
    std::uint64_t pick = std::uniform_int_distribution<std::uint64_t>(0, c->visits - 1)(rng);
    const double reward = c->reward_sum / static_cast<double>(c->visits);
    for (const auto& o : c->outcomes) {
        if (pick < o.count) return ModelSample{o.next, reward, o.terminal, true};
        pick -= o.count;
    }
    const auto& last = c->outcomes.back();
    return ModelSample{last.next, reward, last.terminal, true};
}

}  // namespace rtrl
