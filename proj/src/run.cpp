#include "consim/scenario.hpp"

#include <iostream>
#include <random>
#include <stdexcept>

namespace consim {

SwarmState materialize_initial_state(const Scenario& scenario) {
    if (scenario.initial.explicit_values) {
        return SwarmState(*scenario.initial.explicit_values);
    }
    if (!scenario.initial.uniform) {
        throw std::domain_error("materialize_initial_state: no initial state specified");
    }
    const auto& box = *scenario.initial.uniform;
    std::mt19937_64 rng(scenario.sim.seed);
    std::uniform_real_distribution<double> dist(box.low, box.high);
    Eigen::MatrixXd values(box.n, box.d);
    for (int i = 0; i < box.n; ++i) {
        for (int d = 0; d < box.d; ++d) values(i, d) = dist(rng);
    }
    return SwarmState(std::move(values));
}

Trace run_scenario(const Scenario& scenario) {
    const SwarmState x0 = materialize_initial_state(scenario);
    switch (scenario.application) {
        case ApplicationKind::consensus:
            return run_consensus(x0, scenario.schedule, scenario.protocol, scenario.sim);
        case ApplicationKind::rendezvous: {
            if (x0.dim() != 2 && x0.dim() != 3) {
                throw std::domain_error("run_scenario: rendezvous needs 2D or 3D states");
            }
            std::vector<Topology> all;
            for (const auto& [id, topo] : scenario.schedule.table()) all.push_back(topo);
            if (!has_spanning_tree(topology_union(all))) {
                std::cerr << "rendezvous: no spanning tree anywhere in the schedule; "
                             "agents may not meet\n";
            }
            return run_consensus(x0, scenario.schedule, Protocol::unit_vector(), scenario.sim);
        }
        case ApplicationKind::estimation:
            if (!scenario.estimation) {
                throw std::domain_error("run_scenario: estimation parameters missing");
            }
            return run_estimation(x0.values, scenario.schedule, *scenario.estimation,
                                  scenario.sim);
        case ApplicationKind::optimization:
            if (!scenario.optimization) {
                throw std::domain_error("run_scenario: optimization parameters missing");
            }
            return run_optimization(x0.values.col(0), scenario.schedule, *scenario.optimization,
                                    scenario.sim);
        case ApplicationKind::formation: {
            if (!scenario.formation) {
                throw std::domain_error("run_scenario: formation parameters missing");
            }
            const SwarmState velocities(
                scenario.formation->initial_velocities
                    ? *scenario.formation->initial_velocities
                    : Eigen::MatrixXd::Zero(x0.n(), x0.dim()).eval());
            return run_formation(x0, velocities, scenario.schedule, scenario.formation->spec,
                                 scenario.sim);
        }
    }
    throw std::logic_error("run_scenario: unknown application kind");
}

}  // namespace consim
