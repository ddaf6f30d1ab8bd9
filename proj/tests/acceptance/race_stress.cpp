// Concurrency stress for the parallel agent on the vehicle task. Built twice:
// against the ThreadSanitizer library (any race aborts the process) and
// against the lock-audited library (coverage and nesting are checked here).

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "rtrl/harness.hpp"
#include "rtrl/lock_audit.hpp"
#include "rtrl/rtmba_agent.hpp"

using namespace rtrl;
using Clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
    CLI::App app{"parallel agent stress run"};
    double seconds = 300.0;
    app.add_option("--seconds", seconds, "wall-clock duration")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    auto env = make_environment("car2to7");
    AgentConfig acfg;
    ExperimentConfig run;
    run.mode = PacingMode::Realtime;
    run.rate_hz = 20.0;
    RtmbaAgent agent(*env, make_model(acfg, *env), acfg);
    Rng rng(1);

    lock_audit::reset();
    const auto t0 = Clock::now();
    agent.start();
    int episodes = 0;
    std::uint64_t generated = 0;
    bool failed = false;
    while (std::chrono::duration<double>(Clock::now() - t0).count() < seconds) {
        const auto log = run_episode(*env, agent, run, rng);
        generated += log.delivered;
        ++episodes;
        if (log.failed) {
            std::cout << "  episode " << episodes << " failed: " << log.error << std::endl;
            failed = true;
            break;
        }
        const auto st = deadline_stats(log);
        std::cout << "  episode " << episodes << " reward " << log.total_reward << " met " << st.met_fraction
                  << std::endl;
    }
    agent.stop();
    const auto st = agent.stats();
    const bool conserved = st.experiences_received == generated &&
                           generated == st.experiences_incorporated - st.experiences_seeded + st.experiences_queued;

    std::cout << "  " << episodes << " episodes, " << st.rollouts << " rollouts, " << st.model_updates
              << " model updates" << std::endl;
    if (lock_audit::enabled()) {
        const auto c = lock_audit::snapshot();
        bool covered = true;
        for (int k = 0; k < kLockClassCount; ++k) {
            std::cout << "  " << lock_class_name(static_cast<LockClass>(k)) << " acquisitions " << c.acquisitions[k]
                      << std::endl;
            covered = covered && c.acquisitions[k] > 0;
        }
        const bool pass = !failed && conserved && covered && c.nested == 0 && c.uncovered == 0;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion 9 (lock discipline): " << c.uncovered
                  << " unguarded shared accesses, " << c.nested << " nested lock-class acquisitions" << std::endl;
        return pass ? 0 : 1;
    }
    // Under ThreadSanitizer any report terminates the process before this point.
    const bool pass = !failed && conserved;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion 9 (data races): no races reported over "
              << std::chrono::duration<double>(Clock::now() - t0).count() << " s" << std::endl;
    return pass ? 0 : 1;
}
