#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtrl {

using Rng = std::mt19937_64;

inline constexpr std::size_t kMaxDims = 6;
inline constexpr int kMaxActions = 8;

/// Raised for malformed parameters, names or files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Continuous feature vector as produced by an environment.
using StateVec = std::vector<double>;

/// Per-dimension bin indices of a discretized state. Value type, cheap to copy
/// and hash; used as the key of models and value functions.
class DiscreteState {
public:
    DiscreteState() = default;
    DiscreteState(std::initializer_list<int> bins);
    explicit DiscreteState(const std::vector<int>& bins);

    std::size_t dims() const { return dims_; }
    int operator[](std::size_t i) const { return bins_[i]; }
    void set(std::size_t i, int v) { bins_[i] = static_cast<std::int16_t>(v); }

    std::vector<int> to_vector() const;
    std::string to_string() const;

    friend bool operator==(const DiscreteState& a, const DiscreteState& b) {
        return a.dims_ == b.dims_ && a.bins_ == b.bins_;
    }
    friend bool operator<(const DiscreteState& a, const DiscreteState& b) {
        if (a.dims_ != b.dims_) return a.dims_ < b.dims_;
        return a.bins_ < b.bins_;
    }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ULL ^ dims_;
        for (std::size_t i = 0; i < dims_; ++i) {
            h ^= static_cast<std::uint16_t>(bins_[i]);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }

private:
    std::array<std::int16_t, kMaxDims> bins_{};
    std::uint8_t dims_ = 0;
};

struct DiscreteStateHash {
    std::size_t operator()(const DiscreteState& s) const { return s.hash(); }
};

/// Index into an environment's action set, [0, |A|).
using Action = int;

/// One observed transition <s, a, s', r, terminal>.
struct Experience {
    DiscreteState s;
    Action a = 0;
    DiscreteState s_next;
    double reward = 0.0;
    bool terminal = false;
};

class DiscountFactor {
public:
    explicit DiscountFactor(double gamma);
    double value() const { return gamma_; }
    operator double() const { return gamma_; }

private:
    double gamma_;
};

}  // namespace rtrl

template <>
struct std::hash<rtrl::DiscreteState> {
    std::size_t operator()(const rtrl::DiscreteState& s) const { return s.hash(); }
};
