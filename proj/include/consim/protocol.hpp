#pragma once

#include "consim/graph.hpp"

#include <Eigen/Dense>

#include <string>

namespace consim {

// Per-agent state block: one row per agent, d columns (d = 1 for scalar states).
struct SwarmState {
    Eigen::MatrixXd values;

    SwarmState() = default;
    explicit SwarmState(Eigen::MatrixXd v) : values(std::move(v)) {}
    static SwarmState scalar(const Eigen::VectorXd& x);

    int n() const { return static_cast<int>(values.rows()); }
    int dim() const { return static_cast<int>(values.cols()); }
    bool finite() const { return values.allFinite(); }
};

enum class ProtocolKind { sign, unit_vector, saturated, linear };

std::string to_string(ProtocolKind kind);

// Update-law selector. sign/saturated/linear act on scalar states (d = 1),
// unit_vector on vector states (d >= 2). sat_radius is used by saturated only.
struct Protocol {
    ProtocolKind kind = ProtocolKind::sign;
    double sat_radius = 1.0;

    static Protocol sign() { return {ProtocolKind::sign, 1.0}; }
    static Protocol unit_vector() { return {ProtocolKind::unit_vector, 1.0}; }
    static Protocol saturated(double radius);
    static Protocol linear() { return {ProtocolKind::linear, 1.0}; }
};

// Sign of x in {-1, 0, +1}; sgn(0) = 0 so equal states contribute nothing.
double sgn(double x);

// Saturation with radius a: +/-1 outside [-a, a], x/a inside (continuous for
// every a, equal to the raw middle branch at a = 1).
double sat(double x, double radius);

// Derivative fields for the update laws. Component i sums contributions
// W(i, j) * g(x_j - x_i) over the neighborhood of i; agents with empty
// neighborhoods get a zero derivative. The *_field(state, neighbor_view, ...)
// overloads read agent i's own row from `state` and neighbor rows from
// `neighbor_view`, which lets the simulator inject communication delay;
// the two-argument forms use the same state for both.
Eigen::VectorXd scalar_sign_field(const SwarmState& state, const Topology& topology);
Eigen::VectorXd scalar_sign_field(const SwarmState& state, const SwarmState& neighbor_view,
                                  const Topology& topology);

// Vector-state analog: sums unit vectors toward neighbors. A term is zero
// when the two rows coincide (the singular point of the update law).
Eigen::MatrixXd unit_vector_field(const SwarmState& state, const Topology& topology);
Eigen::MatrixXd unit_vector_field(const SwarmState& state, const SwarmState& neighbor_view,
                                  const Topology& topology);

Eigen::VectorXd saturated_field(const SwarmState& state, const Topology& topology, double radius);
Eigen::VectorXd saturated_field(const SwarmState& state, const SwarmState& neighbor_view,
                                const Topology& topology, double radius);

// Standard linear average consensus, kept as a comparison baseline.
Eigen::VectorXd linear_field(const SwarmState& state, const Topology& topology);
Eigen::VectorXd linear_field(const SwarmState& state, const SwarmState& neighbor_view,
                             const Topology& topology);

// Dispatch on protocol kind; returns an n x d derivative matrix.
Eigen::MatrixXd protocol_field(const SwarmState& state, const SwarmState& neighbor_view,
                               const Topology& topology, const Protocol& protocol);

}  // namespace consim
