#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "rtrl/bellman.hpp"
#include "rtrl/forest_model.hpp"
#include "rtrl/mcts.hpp"
#include "rtrl/mountain_car.hpp"
#include "rtrl/tabular_model.hpp"
#include "rtrl/value_iteration.hpp"

using namespace rtrl;

namespace {

ModelPtr single_action_chain(const std::vector<double>& rewards) {
    std::vector<Experience> xs;
    for (std::size_t i = 0; i < rewards.size(); ++i) {
        const bool last = i + 1 == rewards.size();
        xs.push_back({DiscreteState{static_cast<int>(i)}, 0, DiscreteState{static_cast<int>(i + 1)}, rewards[i], last});
    }
    return TabularModel(StateSpace{{16}, 1, 0.0}).update(xs);
}

MctsParams params(double lambda, int depth = 50) {
    MctsParams p;
    p.c = 2.0;
    p.lambda = lambda;
    p.max_depth = depth;
    p.gamma = 0.99;
    return p;
}

}  // namespace

TEST_CASE("value iteration solves the two-state chain") {
    auto m = single_action_chain({0.0, 1.0});
    ViReport rep;
    auto vf = value_iteration(*m, DiscountFactor(0.9), ViParams{}, &rep);
    CHECK(rep.converged);
    CHECK(vf->read(DiscreteState{0}).q[0] == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(vf->read(DiscreteState{1}).q[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("value iteration with zero rewards yields zero values") {
    std::mt19937_64 rng(2);
    auto xs = oracle::random_mdp_experiences(10, 3, rng);
    for (auto& e : xs) e.reward = 0.0;
    auto m = TabularModel(StateSpace{{10}, 3, 0.0}).update(xs);
    auto vf = value_iteration(*m, DiscountFactor(0.95), ViParams{});
    vf->for_each([](const DiscreteState&, const ActionValues& v) {
        for (int a = 0; a < v.num_actions; ++a) CHECK(v.q[a] == 0.0);
    });
}

TEST_CASE("value iteration on an empty model is empty") {
    TabularModel m(StateSpace{{10}, 3, 0.0});
    ViReport rep;
    auto vf = value_iteration(m, DiscountFactor(0.9), ViParams{}, &rep);
    CHECK(vf->size() == 0);
    CHECK(rep.states == 0);
}

TEST_CASE("value iteration matches the policy-iteration oracle") {
    std::mt19937_64 rng(21);
    const double gamma = 0.95;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 5 + trial;
        const auto xs = oracle::random_mdp_experiences(n, 3, rng);
        auto m = TabularModel(StateSpace{{n}, 3, 0.0}).update(xs);
        ViReport rep;
        auto vf = value_iteration(*m, DiscountFactor(gamma), ViParams{1e-12, 100000}, &rep);
        CHECK(rep.converged);
        CHECK(rep.residual < 1e-9);
        const auto q = oracle::solve_q(oracle::recount(xs, n, 3), gamma);
        for (int s = 0; s < n; ++s) {
            const auto v = vf->read(DiscreteState{s});
            for (Action a = 0; a < 3; ++a) CHECK(std::abs(v.q[a] - q[s][a]) < 1e-6);
        }
    }
}

TEST_CASE("value iteration residuals never increase") {
    std::mt19937_64 rng(8);
    const auto xs = oracle::random_mdp_experiences(20, 3, rng);
    auto m = TabularModel(StateSpace{{20}, 3, 0.0}).update(xs);
    ViReport rep;
    value_iteration(*m, DiscountFactor(0.99), ViParams{}, &rep);
    REQUIRE(rep.residuals.size() > 2);
    for (std::size_t i = 1; i < rep.residuals.size(); ++i) CHECK(rep.residuals[i] <= rep.residuals[i - 1] + 1e-15);
}

TEST_CASE("value iteration values unknown pairs optimistically") {
    // s0 has only action 0 observed; action 1 stays unknown.
    auto m = TabularModel(StateSpace{{4}, 2, 0.5}).update(
        std::vector<Experience>{{DiscreteState{0}, 0, DiscreteState{0}, -1.0, true}});
    auto vf = value_iteration(*m, DiscountFactor(0.9), ViParams{});
    CHECK(vf->read(DiscreteState{0}).q[1] == doctest::Approx(5.0));
    CHECK(vf->read(DiscreteState{0}).q[0] == doctest::Approx(-1.0));
}

TEST_CASE("mcts single terminal step") {
    auto m = single_action_chain({0.0});
    ValueFunction vf(1);
    Rng rng(1);
    const auto trace = mcts_rollout(*m, vf, DiscreteState{0}, params(0.9), rng);
    CHECK(trace.terminal);
    const auto v = vf.read(DiscreteState{0});
    CHECK(v.q[0] == 0.0);
    CHECK(v.n[0] == 1);
}

TEST_CASE("mcts lambda one return on a three-step chain") {
    auto m = single_action_chain({-1.0, -1.0, 0.0});
    ValueFunction vf(1);
    Rng rng(1);
    const auto trace = mcts_rollout(*m, vf, DiscreteState{0}, params(1.0), rng);
    CHECK(trace.steps.size() == 3);
    CHECK(vf.read(DiscreteState{0}).q[0] == doctest::Approx(-1.99).epsilon(1e-12));
    CHECK(vf.read(DiscreteState{1}).q[0] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("mcts values are shared across depths") {
    // Two states that alternate forever.
    auto m = TabularModel(StateSpace{{4}, 1, 0.0})
                 .update(std::vector<Experience>{{DiscreteState{0}, 0, DiscreteState{1}, -1.0, false},
                                                 {DiscreteState{1}, 0, DiscreteState{0}, -1.0, false}});
    ValueFunction vf(1);
    Rng rng(1);
    const auto trace = mcts_rollout(*m, vf, DiscreteState{0}, params(0.9, 6), rng);
    CHECK(trace.steps.size() == 6);
    CHECK(vf.size() == 2);
    CHECK(vf.read(DiscreteState{0}).n[0] == 3);
    CHECK(vf.read(DiscreteState{1}).n[0] == 3);
}

TEST_CASE("uct tries every action before repeating one") {
    Rng rng(3);
    ActionValues v;
    v.num_actions = 4;
    std::vector<int> order;
    for (int i = 0; i < 4; ++i) {
        const Action a = uct_select(v, 2.0, rng);
        CHECK(v.n[a] == 0);
        v.n[a] = 1;
        ++v.visits;
        v.q[a] = -i;
    }
    for (int a = 0; a < 4; ++a) CHECK(v.n[a] == 1);
}

TEST_CASE("uct prefers the bonus-adjusted best action") {
    Rng rng(3);
    ActionValues v;
    v.num_actions = 2;
    v.q = {0.0, -1.0};
    v.n = {10, 10};
    v.visits = 20;
    CHECK(uct_select(v, 0.0, rng) == 0);
    v.n = {1000, 1};
    v.visits = 1001;
    CHECK(uct_select(v, 2.0, rng) == 1);
}

TEST_CASE("mcts keeps values finite and within the reward bounds") {
    std::mt19937_64 gen(4);
    const auto xs = oracle::random_mdp_experiences(15, 3, gen);
    auto m = TabularModel(StateSpace{{15}, 3, 0.0}).update(xs);
    ValueFunction vf(3);
    Rng rng(5);
    const auto p = params(0.9, 100);
    for (int i = 0; i < 3000; ++i) mcts_rollout(*m, vf, DiscreteState{i % 15}, p, rng);
    vf.for_each([&](const DiscreteState&, const ActionValues& v) {
        std::uint64_t total = 0;
        for (int a = 0; a < 3; ++a) {
            CHECK(std::isfinite(v.q[a]));
            CHECK(v.q[a] <= 1e-12);
            CHECK(v.q[a] >= -1.0 / (1.0 - p.gamma) - 1e-9);
            total += v.n[a];
        }
        CHECK(total == v.visits);
    });
}

TEST_CASE("mcts on the gridworld approaches the optimal policy") {
    auto m = TabularModel(StateSpace{{5, 5}, 4, 0.0}).update(oracle::Gridworld::experiences());
    ValueFunction vf(4);
    Rng rng(6);
    MctsParams p = params(0.9, 40);
    p.c = 1.0;
    for (int i = 0; i < 20000; ++i) mcts_rollout(*m, vf, DiscreteState{0, 0}, p, rng);
    const auto opt = oracle::Gridworld::optimal_actions();
    const auto root = vf.read(DiscreteState{0, 0});
    const Action a = greedy_from(root, rng);
    const auto& good = opt.at(DiscreteState{0, 0});
    CHECK(std::find(good.begin(), good.end(), a) != good.end());
}

TEST_CASE("plan_for_budget") {
    const StateSpace space{{100, 100}, 3, 0.0};
    auto m = TabularModel(space).update(std::vector<Experience>{mcar::jumpstart()});
    ValueFunction vf(3);
    Rng rng(7);
    const DiscreteState s0{30, 50};

    CHECK(plan_for_budget(*m, vf, s0, params(0.9, 300), std::chrono::nanoseconds(0), rng) == 0);
    CHECK(vf.size() == 0);

    const auto n = plan_for_budget(*m, vf, s0, params(0.9, 300), std::chrono::milliseconds(100), rng);
    CHECK(n >= 100);

    std::atomic<bool> stop{true};
    CHECK(plan_for_budget(*m, vf, s0, params(0.9, 300), std::chrono::seconds(5), rng, 0, &stop) == 0);
}

TEST_CASE("rollouts are deterministic for a fixed seed and count") {
    std::mt19937_64 gen(9);
    const auto xs = oracle::random_mdp_experiences(12, 3, gen);
    auto m = ForestModel(StateSpace{{12}, 3, 0.0}, {}).update(xs);
    ValueFunction a(3), b(3);
    Rng ra(10), rb(10);
    for (int i = 0; i < 500; ++i) {
        mcts_rollout(*m, a, DiscreteState{0}, params(0.9), ra);
        mcts_rollout(*m, b, DiscreteState{0}, params(0.9), rb);
    }
    CHECK(a.size() == b.size());
    a.for_each([&](const DiscreteState& s, const ActionValues& v) {
        const auto w = b.read(s);
        for (int k = 0; k < 3; ++k) {
            CHECK(v.q[k] == w.q[k]);
            CHECK(v.n[k] == w.n[k]);
        }
    });
}

TEST_CASE("stale statistics are capped when the model changes") {
    auto m = single_action_chain({-1.0, 0.0});
    ValueFunction vf(1);
    Rng rng(1);
    MctsParams p = params(1.0);
    for (int i = 0; i < 50; ++i) mcts_rollout(*m, vf, DiscreteState{0}, p, rng, 1);
    CHECK(vf.read(DiscreteState{0}).n[0] == 50);
    mcts_rollout(*m, vf, DiscreteState{0}, p, rng, 2);
    CHECK(vf.read(DiscreteState{0}).n[0] == 2);
}

TEST_CASE("mcts parameters are validated") {
    MctsParams p;
    p.lambda = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = MctsParams{};
    p.max_depth = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = MctsParams{};
    p.c = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
