#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/resource.h>

#include <thread>

#include "grid_env.hpp"
#include "oracles.hpp"
#include "rtrl/mountain_car.hpp"
#include "rtrl/rtmba_agent.hpp"
#include "rtrl/sequential_agent.hpp"
#include "rtrl/tabular_model.hpp"
#include "rtrl/td_agents.hpp"

using namespace rtrl;
using testenv::GridEnv;

namespace {

// Drives one wait-mode episode and returns the actions taken.
std::vector<Action> drive(Environment& env, Agent& agent, Rng& rng, int max_steps = 1000) {
    std::vector<Action> actions;
    StateVec s = env.reset(rng);
    Action a = agent.first_action(s);
    for (int i = 0; i < max_steps; ++i) {
        actions.push_back(a);
        const auto r = env.step(a);
        if (r.terminal || r.truncated) {
            agent.end_episode(r.reward, r.next_state, r.terminal);
            break;
        }
        a = agent.next_action(r.reward, r.next_state);
    }
    return actions;
}

double process_cpu_seconds() {
    rusage ru{};
    getrusage(RUSAGE_SELF, &ru);
    return ru.ru_utime.tv_sec + ru.ru_utime.tv_usec * 1e-6 + ru.ru_stime.tv_sec + ru.ru_stime.tv_usec * 1e-6;
}

AgentConfig grid_config() {
    AgentConfig cfg;
    cfg.model = "tabular";
    cfg.mcts_c = 1.0;
    cfg.mcts_max_depth = 40;
    cfg.seed = 3;
    return cfg;
}

}  // namespace

TEST_CASE("q-learning one-step update") {
    GridEnv env;
    QLearningAgent agent(env, {0.3, 0.0, 0.99}, 1);
    Experience e{DiscreteState{0, 0}, 3, DiscreteState{1, 0}, -1.0, false};
    agent.td_update(e);
    CHECK(agent.values().read(e.s).q[3] == doctest::Approx(-0.3));

    // Terminal target is the reward alone even if the successor has value.
    QLearningAgent other(env, {0.5, 0.0, 0.99}, 1);
    Experience t{DiscreteState{3, 4}, 3, DiscreteState{4, 4}, 2.0, true};
    other.td_update({DiscreteState{4, 4}, 0, DiscreteState{4, 4}, 10.0, false});
    other.td_update(t);
    CHECK(other.values().read(t.s).q[3] == doctest::Approx(1.0));
}

TEST_CASE("q-learning with epsilon zero is deterministic") {
    GridEnv env;
    std::vector<std::vector<Action>> runs;
    for (int r = 0; r < 2; ++r) {
        QLearningAgent agent(env, {0.3, 0.0, 0.99}, 5);
        Rng rng(1);
        std::vector<Action> all;
        for (int ep = 0; ep < 3; ++ep) {
            auto acts = drive(env, agent, rng);
            all.insert(all.end(), acts.begin(), acts.end());
        }
        runs.push_back(all);
    }
    CHECK(runs[0] == runs[1]);
}

TEST_CASE("q-learning rejects invalid parameters") {
    GridEnv env;
    CHECK_THROWS_AS(QLearningAgent(env, {0.0, 0.1, 0.99}, 1), ConfigError);
    CHECK_THROWS_AS(QLearningAgent(env, {0.3, 1.5, 0.99}, 1), ConfigError);
    CHECK_THROWS_AS(QLearningAgent(env, {0.3, 0.1, 1.0}, 1), ConfigError);
    CHECK_THROWS_AS(DynaAgent(env, {0.3, 0.1, 0.99}, -1, 1), ConfigError);
}

TEST_CASE("dyna with k = 0 behaves exactly like q-learning") {
    MountainCar env(300);
    QLearningAgent q(env, {}, 9);
    DynaAgent d(env, {}, 0, 9);
    Rng r1(4), r2(4);
    for (int ep = 0; ep < 3; ++ep) CHECK(drive(env, q, r1) == drive(env, d, r2));
    q.values().for_each([&](const DiscreteState& s, const ActionValues& v) {
        const auto w = d.values().read(s);
        for (int a = 0; a < 3; ++a) CHECK(v.q[a] == w.q[a]);
    });
}

TEST_CASE("dyna replays a single stored experience") {
    GridEnv env;
    // One real update plus 1000 replays of the same terminal transition.
    DynaAgent e(env, {0.3, 0.0, 0.99}, 1000, 1);
    e.first_action({0, 0});
    e.end_episode(-1.0, {0, 1}, true);
    CHECK(e.stored() == 1);
    bool found = false;
    e.values().for_each([&](const DiscreteState&, const ActionValues& v) {
        for (int k = 0; k < 4; ++k)
            if (v.n[k] > 0) {
                CHECK(v.n[k] == 1001);
                CHECK(v.q[k] == doctest::Approx(-1.0));
                found = true;
            }
    });
    CHECK(found);
}

TEST_CASE("dyna is deterministic for a fixed seed") {
    MountainCar env(200);
    DynaAgent a(env, {}, 50, 2), b(env, {}, 50, 2);
    Rng r1(1), r2(1);
    CHECK(drive(env, a, r1) == drive(env, b, r2));
    CHECK(a.values().size() == b.values().size());
}

TEST_CASE("sequential agents act from the jump-start alone") {
    MountainCar env;
    AgentConfig cfg;
    cfg.plan_budget = std::chrono::milliseconds(5);
    for (const char* name : {"seq-vi", "seq-mcts"}) {
        auto agent = make_agent(name, env, cfg);
        Rng rng(1);
        const Action a = agent->first_action(env.reset(rng));
        CHECK(a >= 0);
        CHECK(a < 3);
        CHECK(agent->model_size() == 1);
        CHECK(agent->stats().experiences_seeded == 1);
    }
}

TEST_CASE("sequential agents fold each transition into the model") {
    GridEnv env;
    auto cfg = grid_config();
    cfg.plan_budget = std::chrono::milliseconds(2);
    SequentialAgent agent(env, make_model(cfg, env), PlannerKind::Mcts, cfg);
    Rng rng(1);
    const auto acts = drive(env, agent, rng, 30);
    const auto st = agent.stats();
    CHECK(st.experiences_received == acts.size());
    CHECK(agent.model_size() == acts.size());
    CHECK(st.experiences_incorporated == st.experiences_received + st.experiences_seeded);
    CHECK(st.rollouts > 0);
}

TEST_CASE("seq-vi and seq-mcts agree on a shared tabular model") {
    GridEnv env;
    auto cfg = grid_config();
    cfg.mcts_c = 5.0;  // comparable to the spread of returns on this grid
    cfg.plan_budget = std::chrono::milliseconds(150);
    auto model = make_model(cfg, env)->update(oracle::Gridworld::experiences());
    SequentialAgent vi(env, model, PlannerKind::ValueIteration, cfg);
    SequentialAgent mcts(env, model, PlannerKind::Mcts, cfg);
    vi.plan(DiscreteState{0, 0});
    REQUIRE(vi.last_vi_report().converged);

    int agree = 0, total = 0;
    Rng rng(3);
    for (const auto& s : model->known_states()) {
        mcts.plan(s);
        const auto exact = vi.values().read(s);
        const Action a = greedy_from(mcts.values().read(s), rng);
        ++total;
        agree += exact.q[a] >= exact.max_q() - 1e-9;
    }
    CHECK(total == 24);
    CHECK(agree >= 0.95 * total);
}

TEST_CASE("rtmba lifecycle") {
    MountainCar env;
    AgentConfig cfg;
    cfg.model = "tabular";
    SUBCASE("start then stop with no actions") {
        RtmbaAgent agent(env, make_model(cfg, env), cfg);
        agent.start();
        const auto t0 = std::chrono::steady_clock::now();
        agent.stop();
        CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(1));
        const auto st = agent.stats();
        CHECK(st.actions == 0);
        CHECK(st.experiences_received == 0);
        CHECK(st.experiences_queued == 0);
        CHECK(st.rollouts == 0);
    }
    SUBCASE("misuse is reported") {
        RtmbaAgent agent(env, make_model(cfg, env), cfg);
        CHECK_THROWS_AS(agent.stop(), LifecycleError);
        CHECK_THROWS_AS(agent.first_action({-0.5, 0.0}), LifecycleError);
        agent.start();
        CHECK_THROWS_AS(agent.start(), LifecycleError);
        agent.stop();
        CHECK_THROWS_AS(agent.stop(), LifecycleError);
    }
}

TEST_CASE("rtmba planning can be paused and resumed") {
    GridEnv env;
    auto cfg = grid_config();
    cfg.idle_priority_background = false;
    RtmbaAgent agent(env, make_model(cfg, env)->update(oracle::Gridworld::experiences()), cfg);
    agent.start();
    Rng rng(1);
    agent.first_action(env.reset(rng));
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    agent.set_planning_paused(true);
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    const auto paused_at = agent.stats().rollouts;
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    CHECK(agent.stats().rollouts == paused_at);
    agent.set_planning_paused(false);
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    CHECK(agent.stats().rollouts > paused_at);
    agent.set_planning_paused(true);
    agent.stop();
    CHECK_FALSE(agent.running());
}

TEST_CASE("rtmba without planning returns tie-broken initial actions") {
    MountainCar env;
    AgentConfig cfg;
    cfg.planning_enabled = false;
    RtmbaAgent agent(env, make_model(cfg, env), cfg);
    agent.start();
    std::vector<int> counts(3, 0);
    Rng rng(1);
    StateVec s = env.reset(rng);
    ++counts[agent.first_action(s)];
    for (int i = 0; i < 300; ++i) {
        const auto r = env.step(mcar::None);
        ++counts[agent.next_action(r.reward, r.next_state)];
    }
    agent.stop();
    for (int c : counts) CHECK(c > 50);
    CHECK(agent.stats().rollouts == 0);
    CHECK(agent.values().size() == 0);
}

TEST_CASE("rtmba incorporates every queued experience in order") {
    GridEnv env(1000);
    auto cfg = grid_config();
    cfg.planning_enabled = false;
    cfg.model_update_delay = std::chrono::milliseconds(50);
    RtmbaAgent agent(env, make_model(cfg, env), cfg);
    agent.start();
    Rng rng(1);
    env.reset(rng);
    agent.first_action(env.state());
    std::vector<DiscreteState> sources{env.discretizer().discretize(env.state())};
    for (int i = 0; i < 150; ++i) {
        const auto r = env.step(i % 4);
        agent.next_action(r.reward, r.next_state);
        sources.push_back(env.discretizer().discretize(r.next_state));
    }
    agent.end_episode(-1.0, env.state(), false);
    agent.stop();
    const auto st = agent.stats();
    CHECK(st.experiences_received == 151);
    CHECK(st.experiences_queued == 0);
    CHECK(st.experiences_incorporated == 151);
    CHECK(agent.model_size() == 151);
    // First-seen order of source states follows the order experiences were sent.
    std::vector<DiscreteState> first_seen;
    for (const auto& x : sources)
        if (std::find(first_seen.begin(), first_seen.end(), x) == first_seen.end()) first_seen.push_back(x);
    CHECK(agent.published_model()->known_states() == first_seen);
    CHECK(st.model_updates >= 1);
}

TEST_CASE("rtmba learner sleeps while the list is empty") {
    MountainCar env;
    AgentConfig cfg;
    cfg.planning_enabled = false;
    RtmbaAgent agent(env, make_model(cfg, env), cfg);
    agent.start();
    const double c0 = process_cpu_seconds();
    std::this_thread::sleep_for(std::chrono::milliseconds(500));
    const double used = process_cpu_seconds() - c0;
    agent.stop();
    CHECK(used < 0.05);
}

TEST_CASE("rtmba planning iterations root at the shared current state") {
    GridEnv env;
    auto cfg = grid_config();
    cfg.planning_enabled = false;
    RtmbaAgent agent(env, make_model(cfg, env), cfg);
    agent.start();
    Rng rng(1);
    agent.first_action(env.reset(rng));
    const DiscreteState root{0, 0};
    REQUIRE(agent.current_state() == root);
    for (int i = 0; i < 50; ++i) {
        const auto before = agent.values().read(root).visits;
        CHECK(agent.planning_iteration() == 1);
        CHECK(agent.values().read(root).visits >= before + 1);
        CHECK(agent.current_state() == root);
    }
    agent.stop();
    CHECK(agent.stats().rollouts == 50);
}

TEST_CASE("rtmba successor values exist before planning roots there") {
    GridEnv env;
    auto cfg = grid_config();
    cfg.planning_enabled = false;
    RtmbaAgent agent(env, make_model(cfg, env)->update(oracle::Gridworld::experiences()), cfg);
    agent.start();
    Rng rng(1);
    agent.first_action(env.reset(rng));
    for (int i = 0; i < 200; ++i) agent.planning_iteration();
    const auto r = env.step(3);  // to (1, 0), reached only through the model so far
    const DiscreteState next = env.discretizer().discretize(r.next_state);
    const bool had_values = agent.values().read(next).present;
    agent.next_action(r.reward, r.next_state);
    agent.stop();
    CHECK(had_values);
}

TEST_CASE("rtmba with all threads learns the gridworld") {
    GridEnv env(200);
    auto cfg = grid_config();
    cfg.idle_priority_background = false;
    RtmbaAgent agent(env, make_model(cfg, env), cfg);
    agent.start();
    Rng rng(1);
    std::size_t last = 0;
    for (int ep = 0; ep < 15; ++ep) {
        StateVec s = env.reset(rng);
        Action a = agent.first_action(s);
        std::size_t steps = 0;
        for (;;) {
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
            const auto r = env.step(a);
            ++steps;
            if (r.terminal || r.truncated) {
                agent.end_episode(r.reward, r.next_state, r.terminal);
                break;
            }
            a = agent.next_action(r.reward, r.next_state);
        }
        last = steps;
    }
    agent.stop();
    const auto st = agent.stats();
    CHECK(st.rollouts > 0);
    CHECK(st.experiences_received == st.experiences_incorporated - st.experiences_seeded + st.experiences_queued);
    CHECK(last <= 12);
}

TEST_CASE("factory knows every agent and model") {
    MountainCar env;
    AgentConfig cfg;
    for (const char* n : {"qlearning", "dyna", "seq-vi", "seq-mcts", "rtmba"}) CHECK(make_agent(n, env, cfg)->name() == n);
    CHECK_THROWS_AS(make_agent("texplore", env, cfg), ConfigError);
    CHECK_THROWS_AS(make_agent("pid", env, cfg), ConfigError);
    cfg.model = "gp";
    CHECK_THROWS_AS(make_model(cfg, env), ConfigError);
    CHECK(mcts_params_for(AgentConfig{}, env).c == 2.0);
    CHECK(mcts_params_for(AgentConfig{}, *make_environment("car2to7")).max_depth == 200);
}
