#pragma once

#include <memory>
#include <vector>

#include "rtrl/model.hpp"
#include "rtrl/value_function.hpp"

namespace rtrl {

struct ViParams {
    double epsilon = 1e-6;
    int max_sweeps = 10000;
};

struct ViReport {
    int sweeps = 0;
    double residual = 0.0;
    bool converged = false;
    std::size_t states = 0;
    std::vector<double> residuals;  // max |Q_{k+1} - Q_k| after each sweep
};

/// States value iteration plans over: the model's known source states plus
/// every state reachable from them through predicted non-terminal successors.
std::vector<DiscreteState> enumerate_states(const Model& model);

/// Synchronous (Jacobi) value iteration over enumerate_states(model).
/// `vf` provides the starting values and receives the result. Unknown (s, a)
/// pairs are fixed at the optimistic value.
ViReport value_iteration(const Model& model, DiscountFactor gamma, const ViParams& params, ValueFunction& vf);

/// Cold-start convenience overload.
std::unique_ptr<ValueFunction> value_iteration(const Model& model, DiscountFactor gamma, const ViParams& params,
                                               ViReport* report = nullptr);

}  // namespace rtrl
