#pragma once

#include "rtrl/model.hpp"
#include "rtrl/value_function.hpp"

namespace rtrl {

/// Value of an unknown (s, a): the fixed point of a self loop paying r_max.
inline double optimistic_value(const StateSpace& space, DiscountFactor gamma) {
    return space.r_max / (1.0 - gamma.value());
}

/// One Bellman optimality backup of (s, a) under `model`:
///   R(s,a) + gamma * sum_s' P(s'|s,a) * max_a' Q(s',a')
/// Terminal successors contribute no future value; an unknown (s, a) returns
/// optimistic_value().
double bellman_backup(const Model& model, const ValueFunction& vf, const DiscreteState& s,
                      Action a, DiscountFactor gamma);

}  // namespace rtrl
