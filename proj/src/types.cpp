#include "rtrl/types.hpp"

#include <cmath>
#include <sstream>

namespace rtrl {

DiscreteState::DiscreteState(std::initializer_list<int> bins)
    : DiscreteState(std::vector<int>(bins)) {}

DiscreteState::DiscreteState(const std::vector<int>& bins) {
    if (bins.size() > kMaxDims) throw ConfigError("DiscreteState: too many dimensions");
    dims_ = static_cast<std::uint8_t>(bins.size());
    for (std::size_t i = 0; i < bins.size(); ++i) bins_[i] = static_cast<std::int16_t>(bins[i]);
}

std::vector<int> DiscreteState::to_vector() const {
    std::vector<int> out(dims_);
    for (std::size_t i = 0; i < dims_; ++i) out[i] = bins_[i];
    return out;
}

std::string DiscreteState::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < dims_; ++i) os << (i ? "," : "") << bins_[i];
    os << ')';
    return os.str();
}

DiscountFactor::DiscountFactor(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("discount factor must lie in (0, 1)");
}

}  // namespace rtrl
