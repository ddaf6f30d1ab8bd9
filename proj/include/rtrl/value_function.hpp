#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "rtrl/lock_audit.hpp"
#include "rtrl/types.hpp"

namespace rtrl {

/// Snapshot of one state's action values and visit statistics.
struct ActionValues {
    int num_actions = 0;
    std::array<double, kMaxActions> q{};
    std::array<std::uint32_t, kMaxActions> n{};
    std::uint64_t visits = 0;  // N(s)
    bool present = false;      // false: never written, values are the initial value

    double max_q() const;
};

/// Mutable per-state record handed to update callbacks. `epoch` is free for
/// planners to tag the entry with the model generation that last touched it.
struct StateEntry {
    ActionValues values;
    std::uint64_t epoch = 0;
};

/// Sparse action-value table shared between threads.
///
/// Every state owns its own mutex; a read or an update holds exactly that one
/// entry for the duration of a copy or a single callback. The hash index is
/// sharded and guarded by reader/writer locks that are never held together
/// with an entry lock. Entries are never erased while other threads may
/// access the table (clear() is for single-threaded use).
class ValueFunction {
public:
    explicit ValueFunction(int num_actions, double initial_value = 0.0);
    ~ValueFunction();

    ValueFunction(const ValueFunction&) = delete;
    ValueFunction& operator=(const ValueFunction&) = delete;

    int num_actions() const { return num_actions_; }
    double initial_value() const { return initial_value_; }

    ActionValues read(const DiscreteState& s) const;

    /// Runs fn(StateEntry&) with exclusive access to s, creating the entry
    /// (initialised to the initial value) if needed.
    template <class Fn>
    void update(const DiscreteState& s, Fn&& fn) {
        Entry* e = find_or_insert(s);
        std::lock_guard lock(e->mu);
        fn(e->data);
    }

    void set_q(const DiscreteState& s, Action a, double q);

    std::size_t size() const;
    void clear();

    /// Visits every entry, copying each under its own lock.
    void for_each(const std::function<void(const DiscreteState&, const ActionValues&)>& fn) const;

    /// Fresh value function with the same configuration and copied contents.
    std::unique_ptr<ValueFunction> clone() const;

private:
    struct Entry {
        mutable PolicyMutex mu;
        StateEntry data;
    };
    struct Shard {
        mutable std::shared_mutex mu;
        std::unordered_map<DiscreteState, std::unique_ptr<Entry>, DiscreteStateHash> map;
    };

    static constexpr std::size_t kShards = 64;

    Shard& shard_for(const DiscreteState& s) const { return shards_[s.hash() % kShards]; }
    Entry* find(const DiscreteState& s) const;
    Entry* find_or_insert(const DiscreteState& s);
    ActionValues initial_values() const;

    int num_actions_;
    double initial_value_;
    mutable std::array<Shard, kShards> shards_;
};

/// Uniformly random choice among the maximisers of values.q.
Action greedy_from(const ActionValues& values, Rng& rng);

/// argmax_a Q(s, a) read under the state's lock; ties broken uniformly.
Action greedy_action(const ValueFunction& vf, const DiscreteState& s, Rng& rng);

}  // namespace rtrl
