#include "rtrl/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "rtrl/bellman.hpp"

namespace rtrl {

std::vector<DiscreteState> enumerate_states(const Model& model) {
    std::vector<DiscreteState> order;
    std::unordered_map<DiscreteState, std::size_t, DiscreteStateHash> seen;
    std::deque<DiscreteState> frontier;
    for (const auto& s : model.known_states()) {
        if (seen.emplace(s, order.size()).second) {
            order.push_back(s);
            frontier.push_back(s);
        }
    }
    while (!frontier.empty()) {
        const DiscreteState s = frontier.front();
        frontier.pop_front();
        for (Action a = 0; a < model.num_actions(); ++a) {
            const Prediction p = model.predict(s, a);
            if (!p.known) continue;
            for (const Outcome& o : p.outcomes) {
                if (o.terminal) continue;
                if (seen.emplace(o.next, order.size()).second) {
                    order.push_back(o.next);
                    frontier.push_back(o.next);
                }
            }
        }
    }
    return order;
}

namespace {

struct CompiledMdp {
    std::size_t states = 0;
    int actions = 0;
    std::vector<double> reward;       // [state * actions + a]
    std::vector<char> known;          // [state * actions + a]
    std::vector<std::size_t> offset;  // CSR row starts, size states*actions + 1
    std::vector<std::uint32_t> next;
    std::vector<double> prob;
};

CompiledMdp compile(const Model& model, const std::vector<DiscreteState>& states) {
    std::unordered_map<DiscreteState, std::uint32_t, DiscreteStateHash> index;
    index.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], static_cast<std::uint32_t>(i));

    CompiledMdp m;
    m.states = states.size();
    m.actions = model.num_actions();
    const std::size_t rows = m.states * static_cast<std::size_t>(m.actions);
    m.reward.resize(rows);
    m.known.resize(rows);
    m.offset.reserve(rows + 1);
    m.offset.push_back(0);
    for (std::size_t i = 0; i < m.states; ++i) {
        for (Action a = 0; a < m.actions; ++a) {
            const std::size_t row = i * m.actions + a;
            const Prediction p = model.predict(states[i], a);
            m.known[row] = p.known;
            m.reward[row] = p.reward;
            if (p.known) {
                for (const Outcome& o : p.outcomes) {
                    if (o.terminal || o.prob == 0.0) continue;
                    m.next.push_back(index.at(o.next));
                    m.prob.push_back(o.prob);
                }
            }
            m.offset.push_back(m.next.size());
        }
    }
    return m;
}

}  // namespace

ViReport value_iteration(const Model& model, DiscountFactor gamma, const ViParams& params, ValueFunction& vf) {
    ViReport report;
    if (params.max_sweeps < 1 || !(params.epsilon > 0.0)) throw ConfigError("value iteration: bad parameters");
    const std::vector<DiscreteState> states = enumerate_states(model);
    report.states = states.size();
    if (states.empty()) {
        report.converged = true;
        return report;
    }
    const CompiledMdp m = compile(model, states);
    const int A = m.actions;
    const double g = gamma.value();
    const double optimistic = optimistic_value(model.space(), gamma);

    std::vector<double> q(m.states * A), q_next(m.states * A), v(m.states);
    for (std::size_t i = 0; i < m.states; ++i) {
        const ActionValues init = vf.read(states[i]);
        for (int a = 0; a < A; ++a) q[i * A + a] = m.known[i * A + a] ? init.q[a] : optimistic;
    }

    while (report.sweeps < params.max_sweeps) {
        for (std::size_t i = 0; i < m.states; ++i) {
            double best = q[i * A];
            for (int a = 1; a < A; ++a) best = std::max(best, q[i * A + a]);
            v[i] = best;
        }
        double residual = 0.0;
        for (std::size_t row = 0; row < q.size(); ++row) {
            double target = optimistic;
            if (m.known[row]) {
                double future = 0.0;
                for (std::size_t k = m.offset[row]; k < m.offset[row + 1]; ++k) future += m.prob[k] * v[m.next[k]];
                target = m.reward[row] + g * future;
            }
            residual = std::max(residual, std::abs(target - q[row]));
            q_next[row] = target;
        }
        q.swap(q_next);
        ++report.sweeps;
        report.residual = residual;
        report.residuals.push_back(residual);
        if (residual < params.epsilon) {
            report.converged = true;
            break;
        }
    }

    for (std::size_t i = 0; i < m.states; ++i) {
        vf.update(states[i], [&](StateEntry& e) {
            for (int a = 0; a < A; ++a) e.values.q[a] = q[i * A + a];
        });
    }
    return report;
}

std::unique_ptr<ValueFunction> value_iteration(const Model& model, DiscountFactor gamma, const ViParams& params,
                                               ViReport* report) {
    auto vf = std::make_unique<ValueFunction>(model.num_actions(), 0.0);
    ViReport r = value_iteration(model, gamma, params, *vf);
    if (report) *report = std::move(r);
    return vf;
}

}  // namespace rtrl
