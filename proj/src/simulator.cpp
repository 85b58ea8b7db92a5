#include "consim/simulator.hpp"

#include "consim/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace consim {

std::vector<std::string> config_issues(const SimConfig& config) {
    std::vector<std::string> issues;
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
        issues.push_back("sim.dt must be positive and finite");
    }
    if (!std::isfinite(config.t_max) || config.t_max < config.dt) {
        issues.push_back("sim.t_max must be at least dt");
    }
    if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
        issues.push_back("sim.epsilon must be positive");
    }
    if (config.delay_steps < 0) issues.push_back("sim.delay_steps must be >= 0");
    return issues;
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::topology_switch: return "topology_switch";
        case EventKind::converged: return "converged";
        case EventKind::bound_violation: return "bound_violation";
    }
    return "unknown";
}

double Trace::dt() const {
    if (times.size() < 2) throw std::domain_error("Trace::dt: need at least two samples");
    return times[1] - times[0];
}

std::optional<double> Trace::first_convergence_time() const {
    for (const TraceEvent& e : events) {
        if (e.kind == EventKind::converged) return e.t;
    }
    return std::nullopt;
}

double lyapunov_scalar(const SwarmState& state) {
    if (state.n() < 1) throw std::domain_error("lyapunov_scalar: empty state");
    if (state.dim() != 1) throw std::domain_error("lyapunov_scalar: requires d = 1");
    return state.values.maxCoeff() - state.values.minCoeff();
}

double lyapunov_vector(const SwarmState& state) {
    if (state.n() < 1) throw std::domain_error("lyapunov_vector: empty state");
    double best = 0.0;
    for (int i = 0; i < state.n(); ++i) {
        for (int j = i + 1; j < state.n(); ++j) {
            best = std::max(best, (state.values.row(i) - state.values.row(j)).squaredNorm());
        }
    }
    return std::sqrt(best);
}

double lyapunov_value(const SwarmState& state) {
    return state.dim() == 1 ? lyapunov_scalar(state) : lyapunov_vector(state);
}

SwarmState step(const SwarmState& state, const Topology& topology, const Protocol& protocol,
                double dt, const SwarmState& stale_state) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::domain_error("step: dt must be positive");
    return SwarmState(state.values +
                      dt * protocol_field(state, stale_state, topology, protocol));
}

Trace run_consensus(const SwarmState& x0, const SwitchingSchedule& schedule,
                    const Protocol& protocol, const SimConfig& config) {
    {
        auto issues = config_issues(config);
        if (!issues.empty()) throw std::domain_error("run_consensus: " + issues.front());
    }
    if (!x0.finite()) throw std::domain_error("run_consensus: initial state must be finite");
    if (x0.n() != schedule.agent_count()) {
        throw std::domain_error("run_consensus: initial state has " + std::to_string(x0.n()) +
                                " agents, schedule expects " +
                                std::to_string(schedule.agent_count()));
    }

    const long steps = std::lround(config.t_max / config.dt);
    Trace trace;
    trace.times.reserve(steps + 1);
    trace.states.reserve(steps + 1);
    trace.lyapunov.reserve(steps + 1);
    trace.topology_ids.reserve(steps + 1);

    SwarmState x = x0;
    // Delay buffer: front is the state delay_steps back (double-buffered reads;
    // neighbor rows always come from a pre-step snapshot).
    std::deque<SwarmState> history;
    std::string prev_id;
    bool converged = false;

    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        const std::string& id = schedule.id_at(t);
        if (k > 0 && id != prev_id) {
            trace.events.push_back({t, EventKind::topology_switch, prev_id + "->" + id});
        }
        prev_id = id;

        const double v = lyapunov_value(x);
        trace.times.push_back(t);
        trace.states.push_back(x);
        trace.lyapunov.push_back(v);
        trace.topology_ids.push_back(id);

        if (!converged && v <= config.epsilon) {
            converged = true;
            trace.events.push_back({t, EventKind::converged, "V=" + format_double(v)});
            if (config.stop_on_convergence) break;
        }
        if (k == steps) break;

        if (config.delay_steps > 0) {
            history.push_back(x);
            if (history.size() > static_cast<std::size_t>(config.delay_steps) + 1) {
                history.pop_front();
            }
            x = step(x, schedule.topology_at(t), protocol, config.dt, history.front());
        } else {
            x = step(x, schedule.topology_at(t), protocol, config.dt, x);
        }
    }
    return trace;
}

double finite_time_bound(const SwarmState& x0, double w_min) {
    if (x0.dim() != 1) throw std::domain_error("finite_time_bound: requires d = 1");
    if (!(w_min > 0.0) || !std::isfinite(w_min)) {
        throw std::domain_error("finite_time_bound: w_min must be positive");
    }
    return lyapunov_scalar(x0) / (2.0 * w_min);
}

bool check_bound(Trace& trace, double bound, double epsilon) {
    if (trace.empty()) throw std::domain_error("check_bound: empty trace");
    std::optional<double> crossing;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (trace.lyapunov[k] <= epsilon) {
            crossing = trace.times[k];
            break;
        }
    }
    const double slack = trace.size() >= 2 ? trace.dt() : 0.0;
    if (crossing && *crossing <= bound + slack) return true;
    trace.events.push_back({trace.times.back(), EventKind::bound_violation,
                            crossing ? "crossing=" + format_double(*crossing) +
                                           " bound=" + format_double(bound)
                                     : "no crossing by t=" + format_double(trace.times.back()) +
                                           " bound=" + format_double(bound)});
    return false;
}

double chattering_amplitude(const Trace& trace, double tail_fraction) {
    if (trace.empty()) throw std::domain_error("chattering_amplitude: empty trace");
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0) {
        throw std::domain_error("chattering_amplitude: tail_fraction must be in (0, 1]");
    }
    const std::size_t n = trace.size();
    std::size_t count = static_cast<std::size_t>(std::llround(tail_fraction * n));
    count = std::clamp<std::size_t>(count, 1, n);
    double lo = trace.lyapunov[n - count];
    double hi = lo;
    for (std::size_t k = n - count; k < n; ++k) {
        lo = std::min(lo, trace.lyapunov[k]);
        hi = std::max(hi, trace.lyapunov[k]);
    }
    return hi - lo;
}

BoundReport bound_report(const Trace& trace, double initial_range, double w_min, double epsilon) {
    if (trace.empty()) throw std::domain_error("bound_report: empty trace");
    if (!(w_min > 0.0)) throw std::domain_error("bound_report: w_min must be positive");
    BoundReport report;
    report.tight_bound = initial_range / (2.0 * w_min);
    report.loose_bound = initial_range / w_min;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (trace.lyapunov[k] <= epsilon) {
            report.first_crossing = trace.times[k];
            break;
        }
    }
    if (report.first_crossing) {
        const double slack = trace.size() >= 2 ? trace.dt() : 0.0;
        report.within_tight = *report.first_crossing <= report.tight_bound + slack;
        report.within_loose = *report.first_crossing <= report.loose_bound + slack;
    }
    return report;
}

}  // namespace consim
