#include "rtrl/bellman.hpp"

namespace rtrl {

double bellman_backup(const Model& model, const ValueFunction& vf, const DiscreteState& s,
                      Action a, DiscountFactor gamma) {
    const Prediction p = model.predict(s, a);
    if (!p.known) return optimistic_value(model.space(), gamma);
    double future = 0.0;
    for (const Outcome& o : p.outcomes) {
        if (o.terminal) continue;
        future += o.prob * vf.read(o.next).max_q();
    }
    return p.reward + gamma.value() * future;
}

}  // namespace rtrl
