#include "consim/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace consim {

namespace {

void check_pair(const SwarmState& state, const SwarmState& neighbor_view,
                const Topology& topology, int required_dim, const char* what) {
    if (state.n() != topology.size()) {
        throw std::domain_error(std::string(what) + ": state has " + std::to_string(state.n()) +
                                " agents, topology has " + std::to_string(topology.size()));
    }
    if (required_dim == 1 && state.dim() != 1) {
        throw std::domain_error(std::string(what) + ": requires scalar states (d = 1)");
    }
    if (required_dim > 1 && state.dim() < 2) {
        throw std::domain_error(std::string(what) + ": requires vector states (d >= 2)");
    }
    if (neighbor_view.n() != state.n() || neighbor_view.dim() != state.dim()) {
        throw std::domain_error(std::string(what) + ": neighbor view shape mismatch");
    }
}

}  // namespace

SwarmState SwarmState::scalar(const Eigen::VectorXd& x) { return SwarmState(Eigen::MatrixXd(x)); }

std::string to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::sign: return "sign";
        case ProtocolKind::unit_vector: return "unit_vector";
        case ProtocolKind::saturated: return "saturated";
        case ProtocolKind::linear: return "linear";
    }
    return "unknown";
}

Protocol Protocol::saturated(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::domain_error("Protocol::saturated: radius must be positive");
    }
    return {ProtocolKind::saturated, radius};
}

double sgn(double x) {
    if (std::isnan(x)) throw std::domain_error("sgn: NaN input");
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
}

double sat(double x, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::domain_error("sat: radius must be positive");
    }
    if (std::isnan(x)) throw std::domain_error("sat: NaN input");
    if (x > radius) return 1.0;
    if (x < -radius) return -1.0;
    return x / radius;
}

Eigen::VectorXd scalar_sign_field(const SwarmState& state, const Topology& topology) {
    return scalar_sign_field(state, state, topology);
}

Eigen::VectorXd scalar_sign_field(const SwarmState& state, const SwarmState& neighbor_view,
                                  const Topology& topology) {
    check_pair(state, neighbor_view, topology, 1, "scalar_sign_field");
    const int n = state.n();
    const auto& w = topology.weights();
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            if (w(i, j) > 0.0) {
                acc += w(i, j) * sgn(neighbor_view.values(j, 0) - state.values(i, 0));
            }
        }
        out(i) = acc;
    }
    return out;
}

Eigen::MatrixXd unit_vector_field(const SwarmState& state, const Topology& topology) {
    return unit_vector_field(state, state, topology);
}

Eigen::MatrixXd unit_vector_field(const SwarmState& state, const SwarmState& neighbor_view,
                                  const Topology& topology) {
    check_pair(state, neighbor_view, topology, 2, "unit_vector_field");
    const int n = state.n();
    const int d = state.dim();
    const auto& w = topology.weights();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (w(i, j) > 0.0) {
                const Eigen::RowVectorXd diff =
                    neighbor_view.values.row(j) - state.values.row(i);
                const double norm = diff.norm();
                if (norm > 0.0) out.row(i) += (w(i, j) / norm) * diff;
            }
        }
    }
    return out;
}

Eigen::VectorXd saturated_field(const SwarmState& state, const Topology& topology, double radius) {
    return saturated_field(state, state, topology, radius);
}

Eigen::VectorXd saturated_field(const SwarmState& state, const SwarmState& neighbor_view,
                                const Topology& topology, double radius) {
    check_pair(state, neighbor_view, topology, 1, "saturated_field");
    const int n = state.n();
    const auto& w = topology.weights();
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            if (w(i, j) > 0.0) {
                acc += w(i, j) * sat(neighbor_view.values(j, 0) - state.values(i, 0), radius);
            }
        }
        out(i) = acc;
    }
    return out;
}

Eigen::VectorXd linear_field(const SwarmState& state, const Topology& topology) {
    return linear_field(state, state, topology);
}

Eigen::VectorXd linear_field(const SwarmState& state, const SwarmState& neighbor_view,
                             const Topology& topology) {
    check_pair(state, neighbor_view, topology, 1, "linear_field");
    const int n = state.n();
    const auto& w = topology.weights();
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            if (w(i, j) > 0.0) {
                acc += w(i, j) * (neighbor_view.values(j, 0) - state.values(i, 0));
            }
        }
        out(i) = acc;
    }
    return out;
}

Eigen::MatrixXd protocol_field(const SwarmState& state, const SwarmState& neighbor_view,
                               const Topology& topology, const Protocol& protocol) {
    switch (protocol.kind) {
        case ProtocolKind::sign:
            return scalar_sign_field(state, neighbor_view, topology);
        case ProtocolKind::saturated:
            return saturated_field(state, neighbor_view, topology, protocol.sat_radius);
        case ProtocolKind::linear:
            return linear_field(state, neighbor_view, topology);
        case ProtocolKind::unit_vector:
            return unit_vector_field(state, neighbor_view, topology);
    }
    throw std::logic_error("protocol_field: unknown protocol kind");
}

}  // namespace consim
