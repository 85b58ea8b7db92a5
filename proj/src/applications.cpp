#include "consim/applications.hpp"

#include "consim/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>

namespace consim {

namespace {

// Sorted N_i with i inserted, the neighborhood both estimation stages use.
std::vector<int> closed_neighborhood(const Topology& topology, int i) {
    std::vector<int> out = topology.neighbors(i);
    out.insert(std::lower_bound(out.begin(), out.end(), i), i);
    return out;
}

}  // namespace

std::vector<std::string> LinearSystemModel::issues(int agent_count) const {
    std::vector<std::string> out;
    const int m = state_dim();
    if (m < 1 || dynamics.rows() != dynamics.cols()) {
        out.push_back("estimation.dynamics must be a nonempty square matrix");
    }
    if (!dynamics.allFinite()) out.push_back("estimation.dynamics must be finite");
    if (static_cast<int>(measurement.size()) != agent_count) {
        out.push_back("estimation needs one measurement matrix per agent");
    }
    for (std::size_t i = 0; i < measurement.size(); ++i) {
        if (measurement[i].cols() != m || measurement[i].rows() < 1) {
            out.push_back("estimation.H[" + std::to_string(i) + "] must have " +
                          std::to_string(m) + " columns");
        }
        if (!measurement[i].allFinite()) {
            out.push_back("estimation.H[" + std::to_string(i) + "] must be finite");
        }
    }
    if (!(process_noise_std >= 0.0)) out.push_back("estimation.process_noise_std must be >= 0");
    if (static_cast<int>(measurement_noise_std.size()) != agent_count) {
        out.push_back("estimation needs one measurement noise std per agent");
    }
    for (std::size_t i = 0; i < measurement_noise_std.size(); ++i) {
        if (!(measurement_noise_std[i] >= 0.0)) {
            out.push_back("estimation.measurement_noise_std[" + std::to_string(i) +
                          "] must be >= 0");
        }
    }
    return out;
}

double objective_value(const LocalObjective& f, double x) {
    const double e = x - f.center;
    return 0.5 * f.curvature * e * e;
}

double objective_gradient(const LocalObjective& f, double x) {
    return f.curvature * (x - f.center);
}

double average_objective(const std::vector<LocalObjective>& objectives, double x) {
    if (objectives.empty()) throw std::domain_error("average_objective: no objectives");
    double acc = 0.0;
    for (const auto& f : objectives) acc += objective_value(f, x);
    return acc / static_cast<double>(objectives.size());
}

double average_minimizer(const std::vector<LocalObjective>& objectives) {
    if (objectives.empty()) throw std::domain_error("average_minimizer: no objectives");
    double num = 0.0;
    double den = 0.0;
    for (const auto& f : objectives) {
        num += f.curvature * f.center;
        den += f.curvature;
    }
    return num / den;
}

double StepSizeSchedule::at(int k) const {
    if (k < 1) throw std::domain_error("StepSizeSchedule::at: iteration index starts at 1");
    return kind == Kind::constant ? alpha0 : alpha0 / static_cast<double>(k);
}

double smooth_sat(double y) { return y / std::sqrt(1.0 + y * y); }

Eigen::RowVectorXd smooth_sat(const Eigen::RowVectorXd& y) {
    return y / std::sqrt(1.0 + y.squaredNorm());
}

Trace rendezvous_run(const SwarmState& positions0, const Topology& topology,
                     const SimConfig& config) {
    if (positions0.dim() != 2 && positions0.dim() != 3) {
        throw std::domain_error("rendezvous_run: positions must be 2D or 3D");
    }
    if (!has_spanning_tree(topology)) {
        std::cerr << "rendezvous_run: topology has no spanning tree; "
                     "agents may not meet\n";
    }
    return run_consensus(positions0, SwitchingSchedule::single(topology),
                         Protocol::unit_vector(), config);
}

std::vector<Eigen::VectorXd> estimation_step(const std::vector<Eigen::VectorXd>& estimates,
                                             const std::vector<Eigen::VectorXd>& measurements,
                                             const LinearSystemModel& model,
                                             const Topology& topology, double gain) {
    const int n = topology.size();
    const int m = model.state_dim();
    if (static_cast<int>(estimates.size()) != n || static_cast<int>(measurements.size()) != n) {
        throw std::domain_error("estimation_step: need one estimate and measurement per agent");
    }
    {
        auto bad = model.issues(n);
        if (!bad.empty()) throw std::domain_error("estimation_step: " + bad.front());
    }
    for (int i = 0; i < n; ++i) {
        if (estimates[i].size() != m) {
            throw std::domain_error("estimation_step: estimate dimension mismatch at agent " +
                                    std::to_string(i));
        }
        if (measurements[i].size() != model.measurement[i].rows()) {
            throw std::domain_error("estimation_step: measurement dimension mismatch at agent " +
                                    std::to_string(i));
        }
    }

    std::vector<Eigen::VectorXd> propagated(n);
    for (int j = 0; j < n; ++j) propagated[j] = model.dynamics * estimates[j];

    std::vector<Eigen::VectorXd> out(n);
    for (int i = 0; i < n; ++i) {
        // Prediction: averaging over N_i and self, self weight 1, row-normalized.
        double total = 1.0;
        Eigen::VectorXd pred = propagated[i];
        for (int j : topology.neighbors(i)) {
            pred += topology.weight(i, j) * propagated[j];
            total += topology.weight(i, j);
        }
        pred /= total;

        // Innovation: unit weights over N_i and self, residuals unit-normalized.
        Eigen::VectorXd innovation = Eigen::VectorXd::Zero(m);
        for (int j : closed_neighborhood(topology, i)) {
            const Eigen::VectorXd residual = measurements[j] - model.measurement[j] * pred;
            const double norm = residual.norm();
            if (norm > 0.0) innovation += model.measurement[j].transpose() * (residual / norm);
        }
        out[i] = pred + gain * innovation;
    }
    return out;
}

Eigen::VectorXd optimization_step(const Eigen::VectorXd& states,
                                  const std::vector<LocalObjective>& objectives,
                                  const Topology& topology, double alpha_k, double gamma) {
    const int n = topology.size();
    if (states.size() != n || static_cast<int>(objectives.size()) != n) {
        throw std::domain_error("optimization_step: need one state and objective per agent");
    }
    if (!(alpha_k > 0.0)) throw std::domain_error("optimization_step: alpha_k must be > 0");
    // gamma = 0 is allowed here: it decouples the agents into independent
    // gradient descents (scenarios themselves require gamma > 0).
    if (!(gamma >= 0.0)) throw std::domain_error("optimization_step: gamma must be >= 0");
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        double consensus = 0.0;
        for (int j = 0; j < n; ++j) {
            if (topology.weights()(i, j) > 0.0) {
                consensus += topology.weights()(i, j) * sgn(states(j) - states(i));
            }
        }
        out(i) = states(i) - alpha_k * objective_gradient(objectives[i], states(i)) +
                 gamma * alpha_k * consensus;
    }
    return out;
}

std::pair<SwarmState, SwarmState> formation_step(const SwarmState& positions,
                                                 const SwarmState& velocities,
                                                 const FormationSpec& spec,
                                                 const Topology& topology, double dt) {
    const int n = topology.size();
    const int d = positions.dim();
    if (d != 2 && d != 3) throw std::domain_error("formation_step: positions must be 2D or 3D");
    if (positions.n() != n || velocities.n() != n || velocities.dim() != d) {
        throw std::domain_error("formation_step: shape mismatch");
    }
    if (spec.target_distances.rows() != n || spec.target_distances.cols() != n) {
        throw std::domain_error("formation_step: target distance matrix must be n x n");
    }
    if (!(dt > 0.0)) throw std::domain_error("formation_step: dt must be positive");

    Eigen::MatrixXd accel = Eigen::MatrixXd::Zero(n, d);
    for (int i = 0; i < n; ++i) {
        const std::vector<int> nbrs = topology.neighbors(i);
        if (!nbrs.empty()) {
            const double coeff = spec.speed * spec.lambda1 / static_cast<double>(nbrs.size());
            for (int j : nbrs) {
                const Eigen::RowVectorXd diff = positions.values.row(j) - positions.values.row(i);
                const double dist = diff.norm();
                if (dist > 0.0) {
                    const double w = coeff * smooth_sat(dist - spec.target_distances(i, j));
                    accel.row(i) += (w / dist) * diff;
                }
            }
        }
        accel.row(i) -= spec.speed * spec.lambda2 *
                        smooth_sat(Eigen::RowVectorXd(velocities.values.row(i)));
    }
    return {SwarmState(positions.values + dt * velocities.values),
            SwarmState(velocities.values + dt * accel)};
}

Trace run_estimation(const Eigen::MatrixXd& estimates0, const SwitchingSchedule& schedule,
                     const EstimationParams& params, const SimConfig& config) {
    {
        auto issues = config_issues(config);
        if (!issues.empty()) throw std::domain_error("run_estimation: " + issues.front());
    }
    const int n = schedule.agent_count();
    const int m = params.model.state_dim();
    {
        auto bad = params.model.issues(n);
        if (!bad.empty()) throw std::domain_error("run_estimation: " + bad.front());
    }
    if (estimates0.rows() != n || estimates0.cols() != m) {
        throw std::domain_error("run_estimation: initial estimates must be n x m");
    }
    if (params.true_initial.size() != m) {
        throw std::domain_error("run_estimation: true_initial must have dimension m");
    }

    const long steps = std::lround(config.t_max / config.dt);
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Eigen::VectorXd> estimates(n);
    for (int i = 0; i < n; ++i) estimates[i] = estimates0.row(i).transpose();
    Eigen::VectorXd truth = params.true_initial;

    Trace trace;
    trace.aux.push_back({"estimation_error", {"t", "agent", "error_norm"}, {}});
    AuxSeries& errors = trace.aux.back();
    bool converged = false;
    std::string prev_id;

    auto record = [&](long k) {
        const double t = static_cast<double>(k) * config.dt;
        const std::string& id = schedule.id_at(t);
        if (k > 0 && id != prev_id) {
            trace.events.push_back({t, EventKind::topology_switch, prev_id + "->" + id});
        }
        prev_id = id;
        Eigen::MatrixXd block(n, m);
        for (int i = 0; i < n; ++i) block.row(i) = estimates[i].transpose();
        const SwarmState state(block);
        const double v = lyapunov_value(state);
        trace.times.push_back(t);
        trace.states.push_back(state);
        trace.lyapunov.push_back(v);
        trace.topology_ids.push_back(id);
        for (int i = 0; i < n; ++i) {
            errors.rows.push_back({t, static_cast<double>(i), (estimates[i] - truth).norm()});
        }
        if (!converged && v <= config.epsilon) {
            converged = true;
            trace.events.push_back({t, EventKind::converged, "V=" + format_double(v)});
        }
    };

    record(0);
    for (long k = 1; k <= steps; ++k) {
        Eigen::VectorXd process(m);
        for (int r = 0; r < m; ++r) process(r) = params.model.process_noise_std * gauss(rng);
        truth = params.model.dynamics * truth + process;

        std::vector<Eigen::VectorXd> measurements(n);
        for (int i = 0; i < n; ++i) {
            const auto& h = params.model.measurement[i];
            Eigen::VectorXd noise(h.rows());
            for (int r = 0; r < h.rows(); ++r) {
                noise(r) = params.model.measurement_noise_std[i] * gauss(rng);
            }
            measurements[i] = h * truth + noise;
        }

        const Topology& topo = schedule.topology_at(static_cast<double>(k - 1) * config.dt);
        estimates = estimation_step(estimates, measurements, params.model, topo, params.gain);
        record(k);
    }
    return trace;
}

Trace run_optimization(const Eigen::VectorXd& x0, const SwitchingSchedule& schedule,
                       const OptimizationParams& params, const SimConfig& config) {
    {
        auto issues = config_issues(config);
        if (!issues.empty()) throw std::domain_error("run_optimization: " + issues.front());
    }
    const int n = schedule.agent_count();
    if (x0.size() != n) throw std::domain_error("run_optimization: initial state size mismatch");
    if (static_cast<int>(params.objectives.size()) != n) {
        throw std::domain_error("run_optimization: need one objective per agent");
    }
    for (const auto& f : params.objectives) {
        if (!(f.curvature > 0.0)) {
            throw std::domain_error("run_optimization: objective curvature must be > 0");
        }
    }
    if (!(params.gamma > 0.0)) throw std::domain_error("run_optimization: gamma must be > 0");
    if (!(params.step_size.alpha0 > 0.0)) {
        throw std::domain_error("run_optimization: alpha0 must be > 0");
    }

    const long iterations = std::lround(config.t_max / config.dt);
    Eigen::VectorXd x = x0;
    Trace trace;
    trace.aux.push_back({"objective", {"t", "agent", "f_value"}, {}});
    AuxSeries& objective = trace.aux.back();
    bool converged = false;
    std::string prev_id;

    auto record = [&](long k) {
        const double t = static_cast<double>(k) * config.dt;
        const std::string& id = schedule.id_at(t);
        if (k > 0 && id != prev_id) {
            trace.events.push_back({t, EventKind::topology_switch, prev_id + "->" + id});
        }
        prev_id = id;
        const SwarmState state{Eigen::MatrixXd(x)};
        const double v = lyapunov_scalar(state);
        trace.times.push_back(t);
        trace.states.push_back(state);
        trace.lyapunov.push_back(v);
        trace.topology_ids.push_back(id);
        for (int i = 0; i < n; ++i) {
            objective.rows.push_back(
                {t, static_cast<double>(i), average_objective(params.objectives, x(i))});
        }
        if (!converged && v <= config.epsilon) {
            converged = true;
            trace.events.push_back({t, EventKind::converged, "V=" + format_double(v)});
        }
    };

    record(0);
    for (long k = 1; k <= iterations; ++k) {
        const Topology& topo = schedule.topology_at(static_cast<double>(k - 1) * config.dt);
        x = optimization_step(x, params.objectives, topo, params.step_size.at(static_cast<int>(k)),
                              params.gamma);
        record(k);
    }
    return trace;
}

Trace run_formation(const SwarmState& positions0, const SwarmState& velocities0,
                    const SwitchingSchedule& schedule, const FormationSpec& spec,
                    const SimConfig& config) {
    {
        auto issues = config_issues(config);
        if (!issues.empty()) throw std::domain_error("run_formation: " + issues.front());
    }
    const int n = schedule.agent_count();
    if (positions0.n() != n) throw std::domain_error("run_formation: position count mismatch");

    // Fixed column set: undirected edge pairs present anywhere in the schedule.
    std::vector<Topology> all;
    for (const auto& [id, topo] : schedule.table()) all.push_back(topo);
    const Topology united = topology_union(all);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (united.weights()(i, j) > 0.0 || united.weights()(j, i) > 0.0) {
                edges.push_back({i, j});
            }
        }
    }

    const long steps = std::lround(config.t_max / config.dt);
    SwarmState positions = positions0;
    SwarmState velocities = velocities0;
    Trace trace;
    trace.aux.push_back({"distance_error", {"t", "agent_i", "agent_j", "error"}, {}});
    AuxSeries& dist_errors = trace.aux.back();
    bool converged = false;
    std::string prev_id;

    auto record = [&](long k) {
        const double t = static_cast<double>(k) * config.dt;
        const std::string& id = schedule.id_at(t);
        if (k > 0 && id != prev_id) {
            trace.events.push_back({t, EventKind::topology_switch, prev_id + "->" + id});
        }
        prev_id = id;
        trace.times.push_back(t);
        trace.states.push_back(positions);
        trace.lyapunov.push_back(lyapunov_value(positions));
        trace.topology_ids.push_back(id);
        double worst = 0.0;
        for (const auto& [i, j] : edges) {
            const double err =
                (positions.values.row(i) - positions.values.row(j)).norm() -
                spec.target_distances(i, j);
            dist_errors.rows.push_back({t, static_cast<double>(i), static_cast<double>(j), err});
            worst = std::max(worst, std::abs(err));
        }
        if (!converged && !edges.empty() && worst <= config.epsilon) {
            converged = true;
            trace.events.push_back(
                {t, EventKind::converged, "max_distance_error=" + format_double(worst)});
        }
    };

    record(0);
    for (long k = 1; k <= steps; ++k) {
        const Topology& topo = schedule.topology_at(static_cast<double>(k - 1) * config.dt);
        auto [next_pos, next_vel] = formation_step(positions, velocities, spec, topo, config.dt);
        positions = std::move(next_pos);
        velocities = std::move(next_vel);
        record(k);
    }
    return trace;
}

}  // namespace consim
