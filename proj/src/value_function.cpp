#include "rtrl/value_function.hpp"

#include <algorithm>
#include <limits>

namespace rtrl {

double ActionValues::max_q() const {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < num_actions; ++a) best = std::max(best, q[a]);
    return best;
}

ValueFunction::ValueFunction(int num_actions, double initial_value)
    : num_actions_(num_actions), initial_value_(initial_value) {
    if (num_actions < 1 || num_actions > kMaxActions)
        throw ConfigError("value function: action count out of range");
}

ValueFunction::~ValueFunction() = default;

ActionValues ValueFunction::initial_values() const {
    ActionValues v;
    v.num_actions = num_actions_;
    for (int a = 0; a < num_actions_; ++a) v.q[a] = initial_value_;
    return v;
}

ValueFunction::Entry* ValueFunction::find(const DiscreteState& s) const {
    Shard& sh = shard_for(s);
    std::shared_lock lock(sh.mu);
    auto it = sh.map.find(s);
    return it == sh.map.end() ? nullptr : it->second.get();
}

ValueFunction::Entry* ValueFunction::find_or_insert(const DiscreteState& s) {
    if (Entry* e = find(s)) return e;
    Shard& sh = shard_for(s);
    std::unique_lock lock(sh.mu);
    auto& slot = sh.map[s];
    if (!slot) {
        slot = std::make_unique<Entry>();
        slot->data.values = initial_values();
        slot->data.values.present = true;
    }
    return slot.get();
}

ActionValues ValueFunction::read(const DiscreteState& s) const {
    Entry* e = find(s);
    if (!e) return initial_values();
    std::lock_guard lock(e->mu);
    lock_audit::require_held(LockClass::Policy);
    return e->data.values;
}

void ValueFunction::set_q(const DiscreteState& s, Action a, double q) {
    update(s, [&](StateEntry& e) {
        lock_audit::require_held(LockClass::Policy);
        e.values.q[a] = q;
    });
}

std::size_t ValueFunction::size() const {
    std::size_t n = 0;
    for (const auto& sh : shards_) {
        std::shared_lock lock(sh.mu);
        n += sh.map.size();
    }
    return n;
}

void ValueFunction::clear() {
    for (auto& sh : shards_) {
        std::unique_lock lock(sh.mu);
        sh.map.clear();
    }
}

void ValueFunction::for_each(
    const std::function<void(const DiscreteState&, const ActionValues&)>& fn) const {
    for (const auto& sh : shards_) {
        std::vector<std::pair<DiscreteState, Entry*>> entries;
        {
            std::shared_lock lock(sh.mu);
            entries.reserve(sh.map.size());
            for (const auto& [k, v] : sh.map) entries.emplace_back(k, v.get());
        }
        for (const auto& [k, e] : entries) {
            ActionValues copy;
            {
                std::lock_guard lock(e->mu);
                copy = e->data.values;
            }
            fn(k, copy);
        }
    }
}

std::unique_ptr<ValueFunction> ValueFunction::clone() const {
    auto out = std::make_unique<ValueFunction>(num_actions_, initial_value_);
    for_each([&](const DiscreteState& s, const ActionValues& v) {
        out->update(s, [&](StateEntry& e) { e.values = v; });
    });
    return out;
}

Action greedy_from(const ActionValues& values, Rng& rng) {
    const double best = values.max_q();
    int ties = 0;
    Action chosen = 0;
    for (int a = 0; a < values.num_actions; ++a) {
        if (values.q[a] == best) {
            ++ties;
            if (std::uniform_int_distribution<int>(0, ties - 1)(rng) == 0) chosen = a;
        }
    }
    return chosen;
}

Action greedy_action(const ValueFunction& vf, const DiscreteState& s, Rng& rng) {
    return greedy_from(vf.read(s), rng);
}

}  // namespace rtrl
