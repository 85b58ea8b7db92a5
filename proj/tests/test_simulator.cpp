#include "consim/simulator.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace consim;

TEST_SUITE_BEGIN("simulator");

namespace {

SwarmState scalar_state(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (double x : xs) v(k++) = x;
    return SwarmState::scalar(v);
}

SimConfig quick_config() {
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_max = 10.0;
    cfg.epsilon = 1e-2;
    return cfg;
}

}  // namespace

TEST_CASE("lyapunov_scalar is the state range") {
    CHECK(lyapunov_scalar(scalar_state({1.0, 5.0, 3.0})) == 4.0);
    CHECK(lyapunov_scalar(scalar_state({2.0, 2.0, 2.0})) == 0.0);
    CHECK(lyapunov_scalar(scalar_state({0.0, 10.0})) == 10.0);
    CHECK_THROWS_AS(lyapunov_scalar(SwarmState(Eigen::MatrixXd::Zero(2, 2))),
                    std::domain_error);
}

TEST_CASE("lyapunov_vector is the point-cloud diameter") {
    Eigen::MatrixXd two(2, 2);
    two << 0.0, 0.0, 3.0, 4.0;
    CHECK(lyapunov_vector(SwarmState(two)) == 5.0);

    CHECK(lyapunov_vector(SwarmState(Eigen::MatrixXd::Constant(4, 3, 1.25))) == 0.0);

    Eigen::MatrixXd square(4, 2);
    square << 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0;
    // Brute-force oracle over all 6 pairs.
    double expect = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            expect = std::max(expect, (square.row(i) - square.row(j)).norm());
        }
    }
    CHECK(lyapunov_vector(SwarmState(square)) == expect);
    CHECK(lyapunov_vector(SwarmState(square)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("step matches hand Euler updates") {
    const Topology pair = Topology::complete(2);
    const SwarmState x = scalar_state({0.0, 4.0});

    const SwarmState sign_next = step(x, pair, Protocol::sign(), 0.1, x);
    CHECK(sign_next.values(0, 0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(sign_next.values(1, 0) == doctest::Approx(3.9).epsilon(1e-12));

    const SwarmState linear_next = step(x, pair, Protocol::linear(), 0.1, x);
    CHECK(linear_next.values(0, 0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(linear_next.values(1, 0) == doctest::Approx(3.6).epsilon(1e-12));

    const SwarmState consensus = scalar_state({2.0, 2.0});
    const SwarmState frozen = step(consensus, pair, Protocol::sign(), 0.1, consensus);
    CHECK(frozen.values == consensus.values);

    CHECK_THROWS_AS(step(x, pair, Protocol::sign(), 0.0, x), std::domain_error);
    CHECK_THROWS_AS(step(x, Topology::complete(3), Protocol::sign(), 0.1, x),
                    std::domain_error);
}

TEST_CASE("two-agent run converges at the closed-form crossing") {
    const SwitchingSchedule sched = SwitchingSchedule::single(Topology::complete(2));
    const SimConfig cfg = quick_config();
    const Trace trace = run_consensus(scalar_state({0.0, 10.0}), sched, Protocol::sign(), cfg);

    // Gap of 10 closes at rate 2 min{W}: first crossing of epsilon near
    // (10 - eps) / 2.
    const auto crossing = trace.first_convergence_time();
    REQUIRE(crossing.has_value());
    CHECK(*crossing == doctest::Approx(4.995).epsilon(1e-3));
    CHECK(trace.times.back() == *crossing);  // stop_on_convergence

    Trace mutable_trace = trace;
    CHECK(check_bound(mutable_trace, finite_time_bound(scalar_state({0.0, 10.0}), 1.0),
                      cfg.epsilon));
}

TEST_CASE("disconnected components never converge and the bound check flags it") {
    const Topology pairs =
        Topology::from_edges(4, {{0, 1, 1.0}, {2, 3, 1.0}}, true);
    SimConfig cfg = quick_config();
    cfg.t_max = 5.0;
    Trace trace = run_consensus(scalar_state({0.0, 1.0, 5.0, 6.0}),
                                SwitchingSchedule::single(pairs), Protocol::sign(), cfg);
    CHECK_FALSE(trace.first_convergence_time().has_value());
    // Each pair settles around its own mean; the gap between means persists.
    CHECK(trace.lyapunov.back() > 4.5);

    const std::size_t before = trace.events.size();
    CHECK_FALSE(check_bound(trace, 5.0, cfg.epsilon));
    REQUIRE(trace.events.size() == before + 1);
    CHECK(trace.events.back().kind == EventKind::bound_violation);
}

TEST_CASE("static trees meet the loose bound; complete graphs meet the tight one") {
    // On trees the hub can get trapped in a sliding cluster with its leaves,
    // which cuts the descent of the extreme value below min{W}; the range /
    // min{W} bound still holds. On complete graphs every extreme agent sees
    // all strictly lower agents, so the range / (2 min{W}) bound holds too.
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    const Topology star = Topology::star(5);
    const Topology complete = Topology::complete(5);
    for (int round = 0; round < 5; ++round) {
        Eigen::VectorXd x(5);
        for (int i = 0; i < 5; ++i) x(i) = value(rng);
        const SwarmState x0 = SwarmState::scalar(x);
        const double range = lyapunov_scalar(x0);

        Trace tree_trace = run_consensus(x0, SwitchingSchedule::single(star), Protocol::sign(),
                                         quick_config());
        CHECK(check_bound(tree_trace, range / 1.0, 1e-2));
        const BoundReport report = bound_report(tree_trace, range, 1.0, 1e-2);
        CHECK(report.within_loose);

        Trace complete_trace = run_consensus(x0, SwitchingSchedule::single(complete),
                                             Protocol::sign(), quick_config());
        CHECK(check_bound(complete_trace, finite_time_bound(x0, 1.0), 1e-2));
    }
}

TEST_CASE("finite_time_bound evaluates the worst-case formula") {
    CHECK(finite_time_bound(scalar_state({0.0, 10.0}), 1.0) == 5.0);
    CHECK(finite_time_bound(scalar_state({3.0, 3.0}), 2.0) == 0.0);
    CHECK(finite_time_bound(scalar_state({1.0, 5.0}), 0.5) == 4.0);
    CHECK_THROWS_AS(finite_time_bound(scalar_state({0.0, 1.0}), 0.0), std::domain_error);
    CHECK_THROWS_AS(finite_time_bound(scalar_state({0.0, 1.0}), -1.0), std::domain_error);
}

TEST_CASE("mean is conserved per step on undirected topologies") {
    const Topology ring = Topology::ring(6);  // unit weights: exact cancellation
    SimConfig cfg = quick_config();
    cfg.t_max = 2.0;
    cfg.stop_on_convergence = false;
    const SwarmState x0 = scalar_state({0.0, 2.0, 7.0, 1.0, 9.0, 4.0});
    const Trace trace = run_consensus(x0, SwitchingSchedule::single(ring),
                                      Protocol::sign(), cfg);
    const double mean0 = trace.states.front().values.mean();
    for (const SwarmState& s : trace.states) {
        CHECK(std::abs(s.values.mean() - mean0) < 1e-12);
    }
}

TEST_CASE("translation invariance of the sign flow") {
    const Topology ring = Topology::ring(3);
    SimConfig cfg = quick_config();
    cfg.t_max = 1.0;  // stop before terminal chattering can decouple the orbits
    cfg.stop_on_convergence = false;
    const SwarmState a = scalar_state({0.0, 4.0, 9.0});
    const SwarmState b = scalar_state({7.0, 11.0, 16.0});
    const Trace ta = run_consensus(a, SwitchingSchedule::single(ring), Protocol::sign(), cfg);
    const Trace tb = run_consensus(b, SwitchingSchedule::single(ring), Protocol::sign(), cfg);
    REQUIRE(ta.size() == tb.size());
    for (std::size_t k = 0; k < ta.size(); ++k) {
        CHECK((tb.states[k].values.array() - ta.states[k].values.array() - 7.0)
                  .abs()
                  .maxCoeff() < 1e-10);
        CHECK(std::abs(tb.lyapunov[k] - ta.lyapunov[k]) < 1e-10);
    }
}

TEST_CASE("runs are bit-reproducible") {
    const Topology star = Topology::star(4);
    SimConfig cfg = quick_config();
    cfg.t_max = 2.0;
    const SwarmState x0 = scalar_state({0.0, 3.0, 8.0, 5.0});
    const Trace a = run_consensus(x0, SwitchingSchedule::single(star), Protocol::sign(), cfg);
    const Trace b = run_consensus(x0, SwitchingSchedule::single(star), Protocol::sign(), cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a.states[k].values == b.states[k].values);
        CHECK(a.lyapunov[k] == b.lyapunov[k]);
    }
}

TEST_CASE("lyapunov is nonincreasing above the overshoot ceiling on a static tree") {
    const Topology star = Topology::star(5);
    const double ceiling = 5 * 1e-3 * star.weights().rowwise().sum().maxCoeff();
    for (Protocol protocol : {Protocol::sign(), Protocol::saturated(0.5), Protocol::linear()}) {
        const Trace trace = run_consensus(scalar_state({0.0, 2.0, 4.0, 7.0, 10.0}),
                                          SwitchingSchedule::single(star), protocol,
                                          quick_config());
        for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
            if (trace.lyapunov[k] > ceiling) {
                CHECK(trace.lyapunov[k + 1] <= trace.lyapunov[k]);
            }
        }
    }
}

TEST_CASE("lyapunov descends across switching periods with spanning-tree windows") {
    std::map<std::string, Topology> table;
    table.emplace("tree", Topology::star(4));
    table.emplace("empty", Topology(4));
    const SwitchingSchedule sched(table, {{"tree", 0.4}, {"empty", 0.4}}, ScheduleMode::cycle);
    SimConfig cfg = quick_config();
    cfg.stop_on_convergence = false;
    cfg.t_max = 4.0;
    const Trace trace = run_consensus(scalar_state({0.0, 3.0, 6.0, 10.0}), sched,
                                      Protocol::sign(), cfg);
    const double ceiling = 4 * cfg.dt * 3.0;
    const std::size_t period_samples = static_cast<std::size_t>(std::lround(0.8 / cfg.dt));
    for (std::size_t k = 0; k + period_samples < trace.size(); k += period_samples) {
        if (trace.lyapunov[k] > ceiling + cfg.epsilon) {
            CHECK(trace.lyapunov[k + period_samples] < trace.lyapunov[k]);
        }
    }
    // Switch events recorded at every dwell boundary.
    std::size_t switches = 0;
    for (const auto& e : trace.events) {
        if (e.kind == EventKind::topology_switch) ++switches;
    }
    CHECK(switches >= 8);
}

TEST_CASE("delay injection produces and orders chattering") {
    const Topology complete = Topology::complete(5);
    const SwitchingSchedule sched = SwitchingSchedule::single(complete);
    SimConfig cfg = quick_config();
    cfg.dt = 5e-3;  // 20 steps of staleness = 0.1 s, enough to sustain chatter
    cfg.t_max = 4.0;
    cfg.stop_on_convergence = false;
    const SwarmState x0 = scalar_state({0.3, 2.1, 5.6, 7.9, 9.4});

    const Trace no_delay = run_consensus(x0, sched, Protocol::sign(), cfg);
    const Trace no_delay_sat = run_consensus(x0, sched, Protocol::saturated(0.1), cfg);
    SimConfig delayed_cfg = cfg;
    delayed_cfg.delay_steps = 20;
    const Trace delayed = run_consensus(x0, sched, Protocol::sign(), delayed_cfg);
    const Trace delayed_sat =
        run_consensus(x0, sched, Protocol::saturated(0.1), delayed_cfg);

    const double amp_no_delay = chattering_amplitude(no_delay, 0.25);
    const double amp_delayed = chattering_amplitude(delayed, 0.25);
    const double amp_delayed_sat = chattering_amplitude(delayed_sat, 0.25);
    const double amp_no_delay_sat = chattering_amplitude(no_delay_sat, 0.25);

    // One-step overshoot ceiling for the converged, no-delay run.
    CHECK(amp_no_delay <= 2.0 * 5 * cfg.dt * complete.weights().rowwise().sum().maxCoeff());
    CHECK(amp_delayed > amp_no_delay);
    CHECK(amp_delayed > amp_delayed_sat);
    // The Lipschitz variant settles; the sign protocol never does.
    CHECK(amp_delayed_sat > amp_no_delay_sat);
    CHECK(amp_no_delay > 0.0);

    CHECK_THROWS_AS(chattering_amplitude(no_delay, 0.0), std::domain_error);
    CHECK_THROWS_AS(chattering_amplitude(no_delay, 1.5), std::domain_error);
    CHECK_THROWS_AS(chattering_amplitude(Trace{}, 0.5), std::domain_error);
}

TEST_CASE("trace sampling is uniform and the lyapunov column nonnegative") {
    SimConfig cfg = quick_config();
    cfg.t_max = 1.0;
    cfg.stop_on_convergence = false;
    const Trace trace = run_consensus(scalar_state({0.0, 5.0}),
                                      SwitchingSchedule::single(Topology::complete(2)),
                                      Protocol::sign(), cfg);
    REQUIRE(trace.size() == 1001);
    CHECK(trace.dt() == doctest::Approx(cfg.dt).epsilon(1e-12));
    for (std::size_t k = 1; k < trace.size(); ++k) {
        CHECK(trace.times[k] > trace.times[k - 1]);
        CHECK(trace.lyapunov[k] >= 0.0);
    }
}

TEST_CASE("run_consensus validates its inputs") {
    const SwitchingSchedule sched = SwitchingSchedule::single(Topology::complete(2));
    SimConfig bad = quick_config();
    bad.dt = 0.0;
    CHECK_THROWS_AS(run_consensus(scalar_state({0.0, 1.0}), sched, Protocol::sign(), bad),
                    std::domain_error);
    CHECK_THROWS_AS(run_consensus(scalar_state({0.0, 1.0, 2.0}), sched, Protocol::sign(),
                                  quick_config()),
                    std::domain_error);
    Eigen::MatrixXd nan_state = Eigen::MatrixXd::Zero(2, 1);
    nan_state(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(run_consensus(SwarmState(nan_state), sched, Protocol::sign(),
                                  quick_config()),
                    std::domain_error);
}

TEST_SUITE_END();
