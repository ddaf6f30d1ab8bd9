#pragma once

#include <vector>

#include "rtrl/types.hpp"

namespace rtrl {

struct DimSpec {
    double min = 0.0;
    double max = 1.0;
    int bins = 1;
};

/// Maps continuous feature vectors onto a uniform per-dimension grid.
/// Values outside [min, max] are clamped; x == max lands in the last bin.
class Discretizer {
public:
    Discretizer() = default;
    explicit Discretizer(std::vector<DimSpec> dims);

    DiscreteState discretize(const StateVec& x) const;
    int bin(std::size_t dim, double x) const;
    double center(std::size_t dim, int bin) const;
    StateVec center(const DiscreteState& s) const;

    std::size_t dims() const { return dims_.size(); }
    const DimSpec& dim(std::size_t i) const { return dims_[i]; }
    const std::vector<DimSpec>& specs() const { return dims_; }
    std::vector<int> bin_counts() const;

    /// Clamp each bin index into range.
    DiscreteState clamp(DiscreteState s) const;

private:
    std::vector<DimSpec> dims_;
};

}  // namespace rtrl
