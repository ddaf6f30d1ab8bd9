#include "rtrl/forest_model.hpp"

#include <algorithm>
#include <cmath>

namespace rtrl {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

ForestModel::ForestModel(StateSpace space, ForestParams params)
    : space_(std::move(space)), params_(params) {
    if (params_.trees < 1) throw ConfigError("forest: need at least one tree");
    if (!(params_.inclusion > 0.0 && params_.inclusion <= 1.0)) throw ConfigError("forest: inclusion must be in (0, 1]");
    if (space_.bins.empty() || space_.bins.size() > kMaxDims) throw ConfigError("forest: bad state dimensionality");
    if (space_.num_actions < 1 || space_.num_actions > kMaxActions) throw ConfigError("forest: bad action count");

    std::vector<int> ranges = space_.bins;
    ranges.push_back(space_.num_actions);
    const std::size_t quantities = space_.bins.size() + 2;
    forests_.resize(quantities);
    trained_.resize(quantities);
    for (std::size_t q = 0; q < quantities; ++q) {
        const auto kind = q == reward_quantity() ? DecisionTree::Kind::Regression : DecisionTree::Kind::Classification;
        for (int t = 0; t < params_.trees; ++t) {
            const std::uint64_t seed = splitmix64(params_.seed ^ splitmix64(q * 1000 + static_cast<std::uint64_t>(t)));
            forests_[q].push_back(std::make_shared<const DecisionTree>(kind, ranges, seed));
        }
    }
}

ForestModel::Inputs ForestModel::inputs(const DiscreteState& s, Action a) const {
    Inputs x{};
    const std::size_t d = space_.bins.size();
    for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<std::int16_t>(s[i]);
    x[d] = static_cast<std::int16_t>(a);
    return x;
}

bool ForestModel::included(std::size_t quantity, int tree, std::size_t experience_index) const {
    const std::uint64_t h = splitmix64(params_.seed ^ splitmix64((quantity << 40) ^ (static_cast<std::uint64_t>(tree) << 32) ^
                                                                 static_cast<std::uint64_t>(experience_index)));
    return static_cast<double>(h >> 11) * 0x1.0p-53 < params_.inclusion;
}

ModelPtr ForestModel::update(std::span<const Experience> batch) const {
    auto next = std::make_shared<ForestModel>(*this);
    const std::size_t dims = space_.bins.size();
    for (std::size_t q = 0; q < forests_.size(); ++q) {
        for (int t = 0; t < params_.trees; ++t) {
            std::shared_ptr<DecisionTree> fresh;
            for (std::size_t i = 0; i < batch.size(); ++i) {
                if (!included(q, t, experiences_ + i)) continue;
                const Experience& e = batch[i];
                TreeSample ts;
                ts.x = inputs(e.s, e.a);
                if (q < dims)
                    ts.label = e.s_next[q] - e.s[q];
                else if (q == reward_quantity())
                    ts.value = e.reward;
                else
                    ts.label = e.terminal ? 1 : 0;
                if (!fresh) fresh = std::make_shared<DecisionTree>(*forests_[q][t]);
                fresh->add(ts);
            }
            if (fresh) {
                fresh->rebuild();
                next->forests_[q][t] = std::move(fresh);
            }
        }
        next->trained_[q].clear();
        for (int t = 0; t < params_.trees; ++t)
            if (next->forests_[q][t]->trained()) next->trained_[q].push_back(t);
    }
    for (const Experience& e : batch) {
        if (!std::isfinite(e.reward)) throw ConfigError("forest model: non-finite reward");
        if (next->known_.insert(e.s).second) next->known_order_.push_back(e.s);
    }
    next->experiences_ += batch.size();
    return next;
}

bool ForestModel::trained() const {
    return std::all_of(trained_.begin(), trained_.end(), [](const auto& v) { return !v.empty(); });
}

ForestModel::Distribution ForestModel::predict_feature(std::size_t dim, const DiscreteState& s, Action a) const {
    Distribution dist;
    const auto& trees = trained_.at(dim);
    if (trees.empty()) return dist;
    const Inputs x = inputs(s, a);
    const double w = 1.0 / static_cast<double>(trees.size());
    for (int t : trees) {
        for (const auto& [label, p] : forests_[dim][t]->leaf(x).dist) {
            auto it = std::find_if(dist.begin(), dist.end(), [&](const auto& e) { return e.first == label; });
            if (it == dist.end())
                dist.emplace_back(label, w * p);
            else
                it->second += w * p;
        }
    }
    std::sort(dist.begin(), dist.end());
    return dist;
}

double ForestModel::terminal_probability(const DiscreteState& s, Action a) const {
    const auto& trees = trained_[terminal_quantity()];
    if (trees.empty()) return 0.0;
    const Inputs x = inputs(s, a);
    double p = 0.0;
    for (int t : trees)
        for (const auto& [label, prob] : forests_[terminal_quantity()][t]->leaf(x).dist)
            if (label == 1) p += prob;
    return p / static_cast<double>(trees.size());
}

double ForestModel::expected_reward(const DiscreteState& s, Action a) const {
    const auto& trees = trained_[reward_quantity()];
    if (trees.empty()) return space_.r_max;
    const Inputs x = inputs(s, a);
    double r = 0.0;
    for (int t : trees) r += forests_[reward_quantity()][t]->leaf(x).mean;
    return r / static_cast<double>(trees.size());
}

Prediction ForestModel::predict(const DiscreteState& s, Action a) const {
    Prediction p;
    if (!trained()) {
        p.outcomes.push_back({s, false, 1.0});
        p.reward = space_.r_max;
        return p;
    }
    p.known = true;
    p.reward = expected_reward(s, a);
    const bool terminal = terminal_probability(s, a) >= 0.5;

    p.outcomes.push_back({s, terminal, 1.0});
    for (std::size_t d = 0; d < space_.bins.size(); ++d) {
        const Distribution dist = predict_feature(d, s, a);
        std::vector<Outcome> expanded;
        expanded.reserve(p.outcomes.size() * dist.size());
        for (const Outcome& o : p.outcomes) {
            for (const auto& [delta, prob] : dist) {
                DiscreteState n = o.next;
                n.set(d, std::clamp(s[d] + delta, 0, space_.bins[d] - 1));
                auto it = std::find_if(expanded.begin(), expanded.end(), [&](const Outcome& e) { return e.next == n; });
                if (it == expanded.end())
                    expanded.push_back({n, terminal, o.prob * prob});
                else
                    it->prob += o.prob * prob;
            }
        }
        p.outcomes = std::move(expanded);
    }
    return p;
}

ModelSample ForestModel::sample(const DiscreteState& s, Action a, Rng& rng) const {
    if (!trained()) return unknown_sample(s);
    const Inputs x = inputs(s, a);
    ModelSample out;
    out.known = true;
    out.next = s;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t d = 0; d < space_.bins.size(); ++d) {
        const auto& trees = trained_[d];
        const int t = trees[std::uniform_int_distribution<std::size_t>(0, trees.size() - 1)(rng)];
        const auto& dist = forests_[d][t]->leaf(x).dist;
        int delta = dist.back().first;
        if (dist.size() > 1) {
            double u = unit(rng);
            for (const auto& [label, p] : dist) {
                if (u < p) {
                    delta = label;
                    break;
                }
                u -= p;
            }
        }
        out.next.set(d, std::clamp(s[d] + delta, 0, space_.bins[d] - 1));
    }
    out.terminal = terminal_probability(s, a) >= 0.5;
    out.reward = expected_reward(s, a);
    return out;
}

}  // namespace rtrl
