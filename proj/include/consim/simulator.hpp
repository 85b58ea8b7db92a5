#pragma once

#include "consim/graph.hpp"
#include "consim/protocol.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace consim {

struct SimConfig {
    double dt = 1e-3;               // fixed integrator step, seconds
    double t_max = 10.0;            // horizon, seconds
    double epsilon = 1e-2;          // convergence threshold on the Lyapunov value
    int delay_steps = 0;            // neighbor reads lag this many steps
    std::uint64_t seed = 0;         // drives random initial states and noise
    bool stop_on_convergence = true;
};

// Non-throwing validation used by scenario parsing; empty means valid.
std::vector<std::string> config_issues(const SimConfig& config);

enum class EventKind { topology_switch, converged, bound_violation };
std::string to_string(EventKind kind);

struct TraceEvent {
    double t = 0.0;
    EventKind kind = EventKind::topology_switch;
    std::string detail;
};

// Extra per-run series emitted by application drivers (estimation error,
// objective values, distance errors); written as <name>.csv.
struct AuxSeries {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Trace {
    std::vector<double> times;
    std::vector<SwarmState> states;
    std::vector<double> lyapunov;
    std::vector<std::string> topology_ids;
    std::vector<TraceEvent> events;
    std::vector<AuxSeries> aux;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    double dt() const;  // sample spacing; requires size >= 2
    std::optional<double> first_convergence_time() const;
};

// Scalar Lyapunov value: the state range max_i x_i - min_i x_i.
double lyapunov_scalar(const SwarmState& state);
// Vector-state proxy: the diameter of the agent point cloud; zero exactly
// when all agents coincide.
double lyapunov_vector(const SwarmState& state);
// Dispatch on dimension.
double lyapunov_value(const SwarmState& state);

// One explicit Euler step x + dt * field. Neighbor rows are read from
// stale_state (pass the current state when there is no delay); each agent's
// own row is always read fresh.
SwarmState step(const SwarmState& state, const Topology& topology, const Protocol& protocol,
                double dt, const SwarmState& stale_state);

// Fixed-step integration of the protocol field under a switching schedule.
// Records every instant, topology switches, and the first Lyapunov crossing
// below epsilon (stopping there when configured to). Deterministic.
Trace run_consensus(const SwarmState& x0, const SwitchingSchedule& schedule,
                    const Protocol& protocol, const SimConfig& config);

// Worst-case convergence time (initial range) / (2 * w_min) for scalar states.
double finite_time_bound(const SwarmState& x0, double w_min);

// True iff the first Lyapunov crossing below epsilon happens no later than
// bound plus one sample of slack. On failure appends a bound_violation event.
bool check_bound(Trace& trace, double bound, double epsilon);

// max - min of the Lyapunov series over the final tail_fraction of the trace.
double chattering_amplitude(const Trace& trace, double tail_fraction);

// Diagnostic used by the CLI: the tight bound range/(2 w_min) holds when both
// extremes keep moving (e.g. strongly connected topologies); the loose bound
// range/w_min needs only one of them to.
struct BoundReport {
    std::optional<double> first_crossing;
    double tight_bound = 0.0;
    double loose_bound = 0.0;
    bool within_tight = false;
    bool within_loose = false;
};
BoundReport bound_report(const Trace& trace, double initial_range, double w_min, double epsilon);

}  // namespace consim
