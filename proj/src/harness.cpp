#include "rtrl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace rtrl {

using Clock = std::chrono::steady_clock;

namespace {

double micros(Clock::duration d) { return std::chrono::duration<double, std::micro>(d).count(); }
double seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

EpisodeLog run_wait(Environment& env, Agent& agent, const ExperimentConfig& cfg, Rng& env_rng) {
    EpisodeLog log;
    const auto period = cfg.period();
    const auto t0 = Clock::now();
    StateVec s = env.reset(env_rng);
    try {
        auto c0 = Clock::now();
        Action a = agent.first_action(s);
        auto latency = Clock::now() - c0;
        log.call_latencies_us.push_back(micros(latency));
        for (;;) {
            const StepResult res = env.step(a);
            StepRecord rec;
            rec.t_wall_s = seconds(Clock::now() - t0);
            rec.state = std::move(s);
            rec.action = a;
            rec.reward = res.reward;
            rec.latency_us = micros(latency);
            rec.deadline_met = latency <= period;
            log.total_reward += res.reward;
            log.steps.push_back(std::move(rec));
            if (res.terminal || res.truncated) {
                log.terminal = res.terminal;
                log.truncated = res.truncated && !res.terminal;
                agent.end_episode(res.reward, res.next_state, res.terminal);
                ++log.delivered;
                break;
            }
            s = res.next_state;
            c0 = Clock::now();
            a = agent.next_action(res.reward, s);
            latency = Clock::now() - c0;
            log.call_latencies_us.push_back(micros(latency));
            ++log.delivered;
        }
    } catch (const std::exception& e) {
        log.failed = true;
        log.error = e.what();
    }
    log.wall_s = seconds(Clock::now() - t0);
    return log;
}

// Single-slot handoff between the ticking thread and the action thread. A
// request that has not been picked up yet is replaced by a newer one (the
// agent always sees the latest state); the rewards of the replaced request
// are carried over so nothing the environment paid is lost.
class ActionRunner {
public:
    enum class Kind { First, Next, End };

    struct Request {
        std::uint64_t id = 0;
        Kind kind = Kind::First;
        StateVec state;
        double reward = 0.0;
        bool terminal = false;
    };

    struct Response {
        std::uint64_t id = 0;
        Action action = 0;
        double latency_us = 0.0;
    };

    explicit ActionRunner(Agent& agent) : agent_(agent) {
        thread_ = std::thread([this] { loop(); });
    }

    ~ActionRunner() {
        {
            std::lock_guard lock(mu_);
            quit_ = true;
        }
        cv_.notify_all();
        thread_.join();
    }

    void post(Request r) {
        {
            std::lock_guard lock(mu_);
            if (pending_) {
                if (pending_->kind == Kind::First) r.kind = Kind::First;
                r.reward += pending_->reward;
            }
            pending_ = std::move(r);
        }
        cv_.notify_all();
    }

    std::optional<Response> response_for(std::uint64_t id) {
        std::lock_guard lock(mu_);
        if (done_ && done_->id == id) return done_;
        return std::nullopt;
    }

    /// Blocks until no request is pending or running. Returns false on agent failure.
    bool drain() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return (!pending_ && !busy_) || error_; });
        return !error_;
    }

    std::uint64_t delivered() {
        std::lock_guard lock(mu_);
        return delivered_;
    }

    std::exception_ptr error() {
        std::lock_guard lock(mu_);
        return error_;
    }

    std::vector<double> call_latencies() {
        std::lock_guard lock(mu_);
        return call_latencies_;
    }

private:
    void loop() {
        std::unique_lock lock(mu_);
        for (;;) {
            cv_.wait(lock, [&] { return quit_ || pending_.has_value(); });
            if (quit_) return;
            Request req = std::move(*pending_);
            pending_.reset();
            busy_ = true;
            lock.unlock();

            Response resp{req.id, 0, 0.0};
            std::exception_ptr err;
            try {
                const auto c0 = Clock::now();
                switch (req.kind) {
                    case Kind::First: resp.action = agent_.first_action(req.state); break;
                    case Kind::Next:
                        resp.action = agent_.next_action(req.reward, req.state);
                        break;
                    case Kind::End: agent_.end_episode(req.reward, req.state, req.terminal); break;
                }
                resp.latency_us = micros(Clock::now() - c0);
            } catch (...) {
                err = std::current_exception();
            }

            lock.lock();
            busy_ = false;
            if (!err && req.kind != Kind::First) ++delivered_;
            if (!err && req.kind != Kind::End) call_latencies_.push_back(resp.latency_us);
            if (err) error_ = err;
            done_ = resp;
            cv_.notify_all();
            if (error_) return;
        }
    }

    Agent& agent_;
    std::uint64_t delivered_ = 0;
    std::vector<double> call_latencies_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::optional<Request> pending_;
    std::optional<Response> done_;
    bool busy_ = false;
    bool quit_ = false;
    std::exception_ptr error_;
    std::thread thread_;
};

EpisodeLog run_realtime(Environment& env, Agent& agent, const ExperimentConfig& cfg, Rng& env_rng) {
    EpisodeLog log;
    const auto period = cfg.period();
    ActionRunner runner(agent);

    StateVec s = env.reset(env_rng);
    const auto t0 = Clock::now();
    std::uint64_t id = 0;
    auto posted = Clock::now();
    runner.post({id, ActionRunner::Kind::First, s, 0.0, false});
    Action last_applied = -1;

    for (std::uint64_t k = 0;; ++k) {
        std::this_thread::sleep_until(t0 + period * static_cast<long>(k + 1));
        if (runner.error()) break;
        const auto now = Clock::now();

        StepRecord rec;
        if (auto resp = runner.response_for(id)) {
            rec.action = resp->action;
            rec.latency_us = resp->latency_us;
            rec.deadline_met = true;
        } else {
            rec.action = env.hold_action(last_applied);
            rec.latency_us = micros(now - posted);
            rec.deadline_met = false;
            ++log.late_actions;
        }
        const StepResult res = env.step(rec.action);
        last_applied = rec.action;
        rec.t_wall_s = seconds(now - t0);
        rec.state = std::move(s);
        rec.reward = res.reward;
        log.total_reward += res.reward;
        log.steps.push_back(std::move(rec));

        if (res.terminal || res.truncated) {
            log.terminal = res.terminal;
            log.truncated = res.truncated && !res.terminal;
            if (runner.drain()) {
                runner.post({++id, ActionRunner::Kind::End, res.next_state, res.reward, res.terminal});
                runner.drain();
            }
            break;
        }
        s = res.next_state;
        posted = Clock::now();
        runner.post({++id, ActionRunner::Kind::Next, s, res.reward, false});
    }

    if (auto err = runner.error()) {
        log.failed = true;
        try {
            std::rethrow_exception(err);
        } catch (const std::exception& e) {
            log.error = e.what();
        } catch (...) {
            log.error = "unknown agent failure";
        }
    }
    runner.drain();
    log.delivered = runner.delivered();
    log.call_latencies_us = runner.call_latencies();
    log.wall_s = seconds(Clock::now() - t0);
    return log;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

}  // namespace

PacingMode pacing_mode(const std::string& name) {
    if (name == "wait") return PacingMode::Wait;
    if (name == "realtime") return PacingMode::Realtime;
    throw ConfigError("unknown mode '" + name + "' (expected wait or realtime)");
}

std::string to_string(PacingMode m) { return m == PacingMode::Wait ? "wait" : "realtime"; }

void ExperimentConfig::validate() const {
    if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw ConfigError("action rate must be > 0");
    if (episodes < 1) throw ConfigError("episodes must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (agent.empty()) throw ConfigError("an agent is required");
}

std::chrono::nanoseconds ExperimentConfig::period() const {
    return std::chrono::nanoseconds(static_cast<std::int64_t>(std::llround(1e9 / rate_hz)));
}

EpisodeLog run_episode(Environment& env, Agent& agent, const ExperimentConfig& cfg, Rng& env_rng) {
    EpisodeLog log = cfg.mode == PacingMode::Wait ? run_wait(env, agent, cfg, env_rng)
                                                  : run_realtime(env, agent, cfg, env_rng);
    log.model_size = agent.model_size();
    return log;
}

double nearest_rank(std::vector<double> values, double p) {
    if (values.empty()) throw ConfigError("nearest_rank: empty sample");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(p * n));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

DeadlineStats deadline_stats(const std::vector<double>& latencies_us, std::size_t met, std::size_t steps) {
    if (latencies_us.empty() || steps == 0) throw ConfigError("deadline_stats: empty log");
    std::vector<double> sorted = latencies_us;
    std::sort(sorted.begin(), sorted.end());
    DeadlineStats st;
    st.p50 = nearest_rank(sorted, 0.50);
    st.p99 = nearest_rank(sorted, 0.99);
    st.p999 = nearest_rank(sorted, 0.999);
    st.max = sorted.back();
    st.met_fraction = static_cast<double>(met) / static_cast<double>(steps);
    return st;
}

DeadlineStats deadline_stats(const EpisodeLog& log) {
    std::vector<double> lat;
    lat.reserve(log.steps.size());
    std::size_t met = 0;
    for (const auto& r : log.steps) {
        lat.push_back(r.latency_us);
        met += r.deadline_met ? 1 : 0;
    }
    return deadline_stats(lat, met, log.steps.size());
}

std::vector<double> sliding_window_avg(const std::vector<double>& series, int w) {
    if (w < 1) throw ConfigError("sliding window must be >= 1");
    std::vector<double> out(series.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        sum += series[i];
        if (i >= static_cast<std::size_t>(w)) sum -= series[i - w];
        const std::size_t count = std::min<std::size_t>(i + 1, static_cast<std::size_t>(w));
        out[i] = sum / static_cast<double>(count);
    }
    return out;
}

MeanCi mean_ci95(const std::vector<double>& xs) {
    MeanCi r;
    if (xs.empty()) return r;
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    r.mean = sum / n;
    r.lo = r.hi = r.mean;
    if (xs.size() < 2) return r;
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const boost::math::students_t dist(n - 1.0);
    const double half = boost::math::quantile(dist, 0.975) * sd / std::sqrt(n);
    r.lo = r.mean - half;
    r.hi = r.mean + half;
    return r;
}

std::vector<SummaryRow> summarize(const ExperimentResult& r) {
    std::size_t episodes = 0;
    for (const auto& t : r.trials) episodes = std::max(episodes, t.episodes.size());
    std::vector<SummaryRow> rows;
    for (std::size_t e = 0; e < episodes; ++e) {
        std::vector<double> rewards;
        double steps = 0.0;
        for (const auto& t : r.trials) {
            if (e >= t.episodes.size()) continue;
            rewards.push_back(t.episodes[e].total_reward);
            steps += t.episodes[e].steps;
        }
        SummaryRow row;
        row.episode = static_cast<int>(e);
        row.reward = mean_ci95(rewards);
        row.mean_steps = steps / static_cast<double>(rewards.size());
        rows.push_back(row);
    }
    return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* progress) {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec || !std::filesystem::is_directory(cfg.out))
        throw ConfigError("cannot create output directory " + cfg.out.string());

    auto open = [&](const std::string& file) {
        std::ofstream os(cfg.out / file, std::ios::trunc);
        if (!os) throw ConfigError("cannot write " + (cfg.out / file).string());
        return os;
    };

    ExperimentResult result;
    std::ofstream episodes_csv = open("episodes.csv");
    episodes_csv << kEpisodeSchema << '\n'
                 << "trial,episode,total_reward,steps,wall_s,terminal,failed,model_size,late_actions,"
                    "deadline_met_fraction,p50_us,p99_us,p999_us,max_us\n";

    for (int t = 0; t < cfg.trials; ++t) {
        TrialResult trial;
        trial.seed = cfg.seed + static_cast<std::uint64_t>(t);
        auto env = make_environment(cfg.env);
        AgentConfig acfg = cfg.agent_cfg;
        acfg.seed = trial.seed;
        auto agent = make_agent(cfg.agent, *env, acfg);
        Rng env_rng(trial.seed);

        std::ofstream steps_csv;
        if (cfg.write_steps) {
            steps_csv = open("steps_trial" + std::to_string(t) + ".csv");
            steps_csv << kStepSchema << '\n' << "trial,episode,step,t_wall_s";
            for (const auto& f : env->feature_names()) steps_csv << ',' << f;
            steps_csv << ",action,reward,latency_us,deadline_met\n";
        }

        agent->start();
        for (int e = 0; e < cfg.episodes; ++e) {
            EpisodeLog log = run_episode(*env, *agent, cfg, env_rng);
            EpisodeSummary sum;
            sum.total_reward = log.total_reward;
            sum.steps = log.step_count();
            sum.wall_s = log.wall_s;
            sum.terminal = log.terminal;
            sum.failed = log.failed;
            sum.model_size = log.model_size;
            if (!log.steps.empty()) sum.deadlines = deadline_stats(log);

            if (cfg.write_steps) {
                for (std::size_t i = 0; i < log.steps.size(); ++i) {
                    const auto& r = log.steps[i];
                    steps_csv << t << ',' << e << ',' << i << ',';
                    if (cfg.record_timing) steps_csv << fmt(r.t_wall_s);
                    for (double x : r.state) steps_csv << ',' << fmt(x);
                    steps_csv << ',' << r.action << ',' << fmt(r.reward) << ',';
                    if (cfg.record_timing) steps_csv << fmt(r.latency_us) << ',' << (r.deadline_met ? 1 : 0);
                    else steps_csv << ',';
                    steps_csv << '\n';
                }
            }
            episodes_csv << t << ',' << e << ',' << fmt(sum.total_reward) << ',' << sum.steps << ','
                         << (cfg.record_timing ? fmt(sum.wall_s) : "") << ',' << sum.terminal << ','
                         << sum.failed << ',' << sum.model_size << ',' << log.late_actions << ',';
            if (cfg.record_timing)
                episodes_csv << fmt(sum.deadlines.met_fraction) << ',' << fmt(sum.deadlines.p50) << ','
                             << fmt(sum.deadlines.p99) << ',' << fmt(sum.deadlines.p999) << ','
                             << fmt(sum.deadlines.max);
            else
                episodes_csv << ",,,,";
            episodes_csv << '\n';

            if (progress)
                *progress << "trial " << t << " episode " << e << " reward " << sum.total_reward << " steps "
                          << sum.steps << " wall " << sum.wall_s << "s met "
                          << sum.deadlines.met_fraction << (log.failed ? " FAILED: " + log.error : "") << '\n';
            trial.experiences_generated += log.delivered;
            trial.episodes.push_back(sum);
            if (log.failed) {
                trial.failed = true;
                trial.error = log.error;
                break;
            }
        }
        agent->stop();
        trial.stats = agent->stats();
        result.trials.push_back(std::move(trial));
    }

    result.summary_csv = cfg.out / "summary.csv";
    std::ofstream summary = open("summary.csv");
    summary << kSummarySchema << '\n' << "episode,mean_reward,ci95_lo,ci95_hi,mean_steps\n";
    for (const auto& row : summarize(result))
        summary << row.episode << ',' << fmt(row.reward.mean) << ',' << fmt(row.reward.lo) << ','
                << fmt(row.reward.hi) << ',' << fmt(row.mean_steps) << '\n';
    return result;
}

}  // namespace rtrl
