#include "rtrl/discretizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rtrl {

Discretizer::Discretizer(std::vector<DimSpec> dims) : dims_(std::move(dims)) {
    if (dims_.empty() || dims_.size() > kMaxDims)
        throw ConfigError("discretizer needs between 1 and " + std::to_string(kMaxDims) + " dimensions");
    for (const auto& d : dims_) {
        if (!(d.min < d.max)) throw ConfigError("discretizer: min must be below max");
        if (d.bins < 1) throw ConfigError("discretizer: bins must be at least 1");
    }
}

int Discretizer::bin(std::size_t dim, double x) const {
    const DimSpec& d = dims_.at(dim);
    const double c = std::clamp(x, d.min, d.max);
    const int b = static_cast<int>(std::floor((c - d.min) / (d.max - d.min) * d.bins));
    return std::clamp(b, 0, d.bins - 1);
}

DiscreteState Discretizer::discretize(const StateVec& x) const {
    if (x.size() != dims_.size()) throw ConfigError("discretize: feature count mismatch");
    DiscreteState s(std::vector<int>(dims_.size(), 0));
    for (std::size_t i = 0; i < dims_.size(); ++i) s.set(i, bin(i, x[i]));
    return s;
}

double Discretizer::center(std::size_t dim, int b) const {
    const DimSpec& d = dims_.at(dim);
    return d.min + (b + 0.5) * (d.max - d.min) / d.bins;
}

StateVec Discretizer::center(const DiscreteState& s) const {
    StateVec x(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) x[i] = center(i, s[i]);
    return x;
}

std::vector<int> Discretizer::bin_counts() const {
    std::vector<int> out;
    out.reserve(dims_.size());
    for (const auto& d : dims_) out.push_back(d.bins);
    return out;
}

DiscreteState Discretizer::clamp(DiscreteState s) const {
    for (std::size_t i = 0; i < dims_.size(); ++i) s.set(i, std::clamp(s[i], 0, dims_[i].bins - 1));
    return s;
}

}  // namespace rtrl
