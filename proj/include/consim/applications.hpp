#pragma once

#include "consim/simulator.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace consim {

// Discrete-time plant x <- A x + v with per-agent observations y_i = H_i x + r_i.
struct LinearSystemModel {
    Eigen::MatrixXd dynamics;                   // A, m x m
    std::vector<Eigen::MatrixXd> measurement;   // H_i, rows_i x m
    double process_noise_std = 0.0;
    std::vector<double> measurement_noise_std;  // per agent

    int state_dim() const { return static_cast<int>(dynamics.rows()); }
    std::vector<std::string> issues(int agent_count) const;  // empty means valid
};

// Local objective f_i(x) = 0.5 * curvature * (x - center)^2, curvature > 0.
struct LocalObjective {
    double curvature = 1.0;
    double center = 0.0;
};

double objective_value(const LocalObjective& f, double x);
double objective_gradient(const LocalObjective& f, double x);
double average_objective(const std::vector<LocalObjective>& objectives, double x);
// Minimizer of the average objective: (sum q_i b_i) / (sum q_i).
double average_minimizer(const std::vector<LocalObjective>& objectives);

struct StepSizeSchedule {
    enum class Kind { constant, diminishing };
    Kind kind = Kind::diminishing;
    double alpha0 = 0.5;
    double at(int k) const;  // k >= 1; diminishing is alpha0 / k
};

// Distance-based formation law parameters; gains satisfy 0 < lambda1,
// lambda2 < 1 with lambda1 + lambda2 = 1, speed is the u-bar scale.
struct FormationSpec {
    Eigen::MatrixXd target_distances;  // n x n, symmetric where both edges exist
    double lambda1 = 0.5;
    double lambda2 = 0.5;
    double speed = 1.0;
};

// Smooth odd squashing y / sqrt(1 + |y|^2) used by the formation law.
double smooth_sat(double y);
Eigen::RowVectorXd smooth_sat(const Eigen::RowVectorXd& y);

// Integrates the unit-vector field over a static topology until the point
// cloud diameter drops below epsilon. Positions are 2D or 3D. Warns on
// stderr when the topology lacks a spanning tree.
Trace rendezvous_run(const SwarmState& positions0, const Topology& topology,
                     const SimConfig& config);

// One consensus+innovation update. Prediction averages A * estimate over
// N_i and self (self weight 1, row normalized); the innovation adds
// gain * sum over N_i and self of H_j^T applied to the unit-normalized
// residual y_j - H_j * prediction (zero residual contributes nothing).
std::vector<Eigen::VectorXd> estimation_step(const std::vector<Eigen::VectorXd>& estimates,
                                             const std::vector<Eigen::VectorXd>& measurements,
                                             const LinearSystemModel& model,
                                             const Topology& topology, double gain);

// One distributed gradient-descent iterate:
// x_i - alpha_k * grad f_i(x_i) + gamma * alpha_k * sum_j W(i,j) sgn(x_j - x_i).
Eigen::VectorXd optimization_step(const Eigen::VectorXd& states,
                                  const std::vector<LocalObjective>& objectives,
                                  const Topology& topology, double alpha_k, double gamma);

// One Euler step of the double integrator: positions advance by velocity,
// velocities by the distance-error attraction minus velocity damping.
// Agents with empty neighborhoods only damp. Coincident pairs contribute
// nothing to the attraction term.
std::pair<SwarmState, SwarmState> formation_step(const SwarmState& positions,
                                                 const SwarmState& velocities,
                                                 const FormationSpec& spec,
                                                 const Topology& topology, double dt);

// Scenario-level drivers. Each runs the full horizon (the first Lyapunov or
// distance-error crossing is recorded as an event but never stops the run)
// and attaches the application's aux series to the trace.

struct EstimationParams {
    LinearSystemModel model;
    double gain = 0.1;
    Eigen::VectorXd true_initial;  // plant state at k = 0
};
Trace run_estimation(const Eigen::MatrixXd& estimates0, const SwitchingSchedule& schedule,
                     const EstimationParams& params, const SimConfig& config);

struct OptimizationParams {
    std::vector<LocalObjective> objectives;
    double gamma = 1.0;
    StepSizeSchedule step_size;
};
Trace run_optimization(const Eigen::VectorXd& x0, const SwitchingSchedule& schedule,
                       const OptimizationParams& params, const SimConfig& config);

Trace run_formation(const SwarmState& positions0, const SwarmState& velocities0,
                    const SwitchingSchedule& schedule, const FormationSpec& spec,
                    const SimConfig& config);

}  // namespace consim
