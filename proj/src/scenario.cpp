#include "consim/scenario.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace consim {

using nlohmann::json;

namespace {

struct Issues {
    std::vector<std::string> list;
    void add(std::string s) { list.push_back(std::move(s)); }
    bool ok() const { return list.empty(); }
};

std::string join_issues(const std::vector<std::string>& issues) {
    std::ostringstream out;
    out << "scenario has " << issues.size() << (issues.size() == 1 ? " problem:" : " problems:");
    for (const auto& s : issues) out << "\n  - " << s;
    return out.str();
}

std::optional<double> get_number(const json& obj, const std::string& key, const std::string& ctx,
                                 Issues& issues, bool required = true) {
    if (!obj.contains(key)) {
        if (required) issues.add(ctx + "." + key + " is required");
        return std::nullopt;
    }
    if (!obj[key].is_number()) {
        issues.add(ctx + "." + key + " must be a number");
        return std::nullopt;
    }
    return obj[key].get<double>();
}

std::optional<int> get_int(const json& obj, const std::string& key, const std::string& ctx,
                           Issues& issues, bool required = true) {
    if (!obj.contains(key)) {
        if (required) issues.add(ctx + "." + key + " is required");
        return std::nullopt;
    }
    if (!obj[key].is_number_integer()) {
        issues.add(ctx + "." + key + " must be an integer");
        return std::nullopt;
    }
    return obj[key].get<int>();
}

std::optional<std::string> get_string(const json& obj, const std::string& key,
                                      const std::string& ctx, Issues& issues,
                                      bool required = true) {
    if (!obj.contains(key)) {
        if (required) issues.add(ctx + "." + key + " is required");
        return std::nullopt;
    }
    if (!obj[key].is_string()) {
        issues.add(ctx + "." + key + " must be a string");
        return std::nullopt;
    }
    return obj[key].get<std::string>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& ctx, Issues& issues,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) {
        issues.add(ctx + "." + key + " must be a boolean");
        return fallback;
    }
    return obj[key].get<bool>();
}

// Rectangular 2D numeric array.
std::optional<Eigen::MatrixXd> parse_matrix(const json& j, const std::string& ctx,
                                            Issues& issues) {
    if (!j.is_array() || j.empty()) {
        issues.add(ctx + " must be a nonempty array of rows");
        return std::nullopt;
    }
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    if (!j[0].is_array() || j[0].empty()) {
        issues.add(ctx + " rows must be nonempty arrays of numbers");
        return std::nullopt;
    }
    cols = j[0].size();
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            issues.add(ctx + " must be rectangular (row " + std::to_string(r) + " differs)");
            return std::nullopt;
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) {
                issues.add(ctx + "[" + std::to_string(r) + "][" + std::to_string(c) +
                           "] must be a number");
                return std::nullopt;
            }
            m(r, c) = j[r][c].get<double>();
        }
    }
    if (!m.allFinite()) {
        issues.add(ctx + " must contain finite values");
        return std::nullopt;
    }
    return m;
}

std::optional<Eigen::VectorXd> parse_vector(const json& j, const std::string& ctx,
                                            Issues& issues) {
    if (!j.is_array() || j.empty()) {
        issues.add(ctx + " must be a nonempty array of numbers");
        return std::nullopt;
    }
    Eigen::VectorXd v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number()) {
            issues.add(ctx + "[" + std::to_string(k) + "] must be a number");
            return std::nullopt;
        }
        v(k) = j[k].get<double>();
    }
    if (!v.allFinite()) {
        issues.add(ctx + " must contain finite values");
        return std::nullopt;
    }
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
    return out;
}

std::optional<Topology> parse_topology(const std::string& id, const json& j, Issues& issues) {
    const std::string ctx = "topologies." + id;
    if (!j.is_object()) {
        issues.add(ctx + " must be an object");
        return std::nullopt;
    }
    auto n = get_int(j, "n", ctx, issues);
    if (!n || *n < 1) {
        if (n) issues.add(ctx + ".n must be a positive agent count");
        return std::nullopt;
    }
    const bool has_weights = j.contains("weights");
    const bool has_edges = j.contains("edges");
    if (has_weights == has_edges) {
        issues.add(ctx + " needs exactly one of 'weights' or 'edges'");
        return std::nullopt;
    }

    if (has_weights) {
        auto m = parse_matrix(j["weights"], ctx + ".weights", issues);
        if (!m) return std::nullopt;
        if (m->rows() != *n || m->cols() != *n) {
            issues.add(ctx + ".weights must be " + std::to_string(*n) + "x" + std::to_string(*n));
            return std::nullopt;
        }
        bool bad = false;
        for (int r = 0; r < *n; ++r) {
            if ((*m)(r, r) != 0.0) {
                issues.add(ctx + ".weights[" + std::to_string(r) + "][" + std::to_string(r) +
                           "] must be 0 (no self-loops)");
                bad = true;
            }
            for (int c = 0; c < *n; ++c) {
                if ((*m)(r, c) < 0.0) {
                    issues.add(ctx + ".weights[" + std::to_string(r) + "][" + std::to_string(c) +
                               "] is negative; weights must be nonnegative");
                    bad = true;
                }
            }
        }
        if (bad) return std::nullopt;
        return Topology::from_weights(std::move(*m));
    }

    if (!j["edges"].is_array()) {
        issues.add(ctx + ".edges must be an array");
        return std::nullopt;
    }
    const bool undirected = get_bool(j, "undirected", ctx, issues, false);
    std::vector<Topology::Edge> edges;
    bool bad = false;
    for (std::size_t k = 0; k < j["edges"].size(); ++k) {
        const json& e = j["edges"][k];
        const std::string ectx = ctx + ".edges[" + std::to_string(k) + "]";
        if (!e.is_object()) {
            issues.add(ectx + " must be an object {from, to, weight}");
            bad = true;
            continue;
        }
        Issues local;
        auto from = get_int(e, "from", ectx, local);
        auto to = get_int(e, "to", ectx, local);
        auto weight = get_number(e, "weight", ectx, local, false);
        for (auto& s : local.list) issues.add(s);
        if (!local.ok() || !from || !to) {
            bad = true;
            continue;
        }
        const double w = weight.value_or(1.0);
        if (*from < 0 || *from >= *n || *to < 0 || *to >= *n) {
            issues.add(ectx + " indices must be in [0, " + std::to_string(*n) + ")");
            bad = true;
        } else if (*from == *to) {
            issues.add(ectx + " is a self-loop; self-loops are not allowed");
            bad = true;
        } else if (!(w > 0.0) || !std::isfinite(w)) {
            issues.add(ectx + ".weight must be positive (negative or zero weights are not "
                              "valid edges)");
            bad = true;
        } else {
            edges.push_back({*from, *to, w});
        }
    }
    if (bad) return std::nullopt;
    return Topology::from_edges(*n, edges, undirected);
}

ApplicationKind application_kind_from_string(const std::string& s, Issues& issues) {
    if (s == "consensus") return ApplicationKind::consensus;
    if (s == "rendezvous") return ApplicationKind::rendezvous;
    if (s == "estimation") return ApplicationKind::estimation;
    if (s == "optimization") return ApplicationKind::optimization;
    if (s == "formation") return ApplicationKind::formation;
    issues.add("application.kind '" + s +
               "' is not one of consensus|rendezvous|estimation|optimization|formation");
    return ApplicationKind::consensus;
}

}  // namespace

std::string to_string(ApplicationKind kind) {
    switch (kind) {
        case ApplicationKind::consensus: return "consensus";
        case ApplicationKind::rendezvous: return "rendezvous";
        case ApplicationKind::estimation: return "estimation";
        case ApplicationKind::optimization: return "optimization";
        case ApplicationKind::formation: return "formation";
    }
    return "unknown";
}

ScenarioError::ScenarioError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ScenarioError({"syntax error at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + e.what()});
    }

    Issues issues;
    if (!doc.is_object()) {
        throw ScenarioError({"scenario document must be a JSON object"});
    }

    Scenario s;
    if (auto name = get_string(doc, "name", "scenario", issues)) {
        if (name->empty()) issues.add("scenario.name must not be empty");
        s.name = *name;
    }
    if (auto desc = get_string(doc, "description", "scenario", issues, false)) {
        s.description = *desc;
    }

    // --- topologies -------------------------------------------------------
    std::map<std::string, Topology> table;
    std::vector<std::string> declared_ids;
    int n_agents = -1;
    if (!doc.contains("topologies") || !doc["topologies"].is_object() ||
        doc["topologies"].empty()) {
        issues.add("topologies must be a nonempty object of named topologies");
    } else {
        for (const auto& [id, tj] : doc["topologies"].items()) {
            declared_ids.push_back(id);
            if (auto topo = parse_topology(id, tj, issues)) {
                if (n_agents < 0) n_agents = topo->size();
                if (topo->size() != n_agents) {
                    issues.add("topologies." + id + " has n=" + std::to_string(topo->size()) +
                               " but other topologies have n=" + std::to_string(n_agents));
                } else {
                    table.emplace(id, std::move(*topo));
                }
            }
        }
    }

    // --- schedule ----------------------------------------------------------
    std::vector<ScheduleEntry> entries;
    ScheduleMode mode = ScheduleMode::cycle;
    if (!doc.contains("schedule") || !doc["schedule"].is_object()) {
        issues.add("schedule must be an object with 'entries'");
    } else {
        const json& sj = doc["schedule"];
        if (auto ms = get_string(sj, "mode", "schedule", issues, false)) {
            if (*ms == "cycle") {
                mode = ScheduleMode::cycle;
            } else if (*ms == "once") {
                mode = ScheduleMode::once;
            } else {
                issues.add("schedule.mode must be 'cycle' or 'once'");
            }
        }
        if (!sj.contains("entries") || !sj["entries"].is_array() || sj["entries"].empty()) {
            issues.add("schedule.entries must be a nonempty array");
        } else {
            for (std::size_t k = 0; k < sj["entries"].size(); ++k) {
                const std::string ctx = "schedule.entries[" + std::to_string(k) + "]";
                const json& ej = sj["entries"][k];
                if (!ej.is_object()) {
                    issues.add(ctx + " must be an object {topology, dwell}");
                    continue;
                }
                auto id = get_string(ej, "topology", ctx, issues);
                auto dwell = get_number(ej, "dwell", ctx, issues);
                if (id && table.find(*id) == table.end()) {
                    // Only report ids that were never declared; a declared
                    // topology that failed its own validation is already
                    // covered by its own issues.
                    if (std::find(declared_ids.begin(), declared_ids.end(), *id) ==
                        declared_ids.end()) {
                        issues.add(ctx + " references unknown topology '" + *id + "'");
                    }
                    id.reset();
                }
                if (dwell && (!(*dwell > 0.0) || !std::isfinite(*dwell))) {
                    issues.add(ctx + ".dwell must be a positive duration");
                    dwell.reset();
                }
                if (id && dwell) entries.push_back({*id, *dwell});
            }
        }
    }

    // --- protocol ----------------------------------------------------------
    std::optional<ProtocolKind> protocol_kind;
    double sat_radius = 1.0;
    if (doc.contains("protocol")) {
        if (!doc["protocol"].is_object()) {
            issues.add("protocol must be an object {kind, radius?}");
        } else if (auto kind = get_string(doc["protocol"], "kind", "protocol", issues)) {
            if (*kind == "sign") {
                protocol_kind = ProtocolKind::sign;
            } else if (*kind == "unit_vector") {
                protocol_kind = ProtocolKind::unit_vector;
            } else if (*kind == "saturated") {
                protocol_kind = ProtocolKind::saturated;
            } else if (*kind == "linear") {
                protocol_kind = ProtocolKind::linear;
            } else {
                issues.add("protocol.kind '" + *kind +
                           "' is not one of sign|unit_vector|saturated|linear");
            }
            if (protocol_kind == ProtocolKind::saturated) {
                if (auto r = get_number(doc["protocol"], "radius", "protocol", issues, false)) {
                    if (!(*r > 0.0) || !std::isfinite(*r)) {
                        issues.add("protocol.radius must be positive");
                    } else {
                        sat_radius = *r;
                    }
                }
            }
        }
    }

    // --- initial state -----------------------------------------------------
    int d_state = -1;
    if (!doc.contains("initial_state") || !doc["initial_state"].is_object()) {
        issues.add("initial_state must be an object with 'values' or 'uniform'");
    } else {
        const json& ij = doc["initial_state"];
        const bool has_values = ij.contains("values");
        const bool has_uniform = ij.contains("uniform");
        if (has_values == has_uniform) {
            issues.add("initial_state needs exactly one of 'values' or 'uniform'");
        } else if (has_values) {
            if (auto m = parse_matrix(ij["values"], "initial_state.values", issues)) {
                d_state = static_cast<int>(m->cols());
                if (n_agents > 0 && m->rows() != n_agents) {
                    issues.add("initial_state.values must have one row per agent (expected " +
                               std::to_string(n_agents) + ")");
                }
                s.initial.explicit_values = std::move(*m);
            }
        } else {
            const json& uj = ij["uniform"];
            if (!uj.is_object()) {
                issues.add("initial_state.uniform must be an object {low, high, n, d}");
            } else {
                InitialStateSpec::UniformBox box;
                auto low = get_number(uj, "low", "initial_state.uniform", issues);
                auto high = get_number(uj, "high", "initial_state.uniform", issues);
                auto n = get_int(uj, "n", "initial_state.uniform", issues);
                auto d = get_int(uj, "d", "initial_state.uniform", issues, false);
                if (low && high) {
                    if (!(*low < *high)) {
                        issues.add("initial_state.uniform needs low < high");
                    } else {
                        box.low = *low;
                        box.high = *high;
                    }
                }
                if (n) {
                    box.n = *n;
                    if (n_agents > 0 && *n != n_agents) {
                        issues.add("initial_state.uniform.n must match the topology agent count " +
                                   std::to_string(n_agents));
                    }
                }
                box.d = d.value_or(1);
                if (box.d < 1) issues.add("initial_state.uniform.d must be >= 1");
                d_state = box.d;
                s.initial.uniform = box;
            }
        }
    }

    // --- sim ----------------------------------------------------------------
    if (doc.contains("sim")) {
        if (!doc["sim"].is_object()) {
            issues.add("sim must be an object");
        } else {
            const json& cj = doc["sim"];
            if (auto v = get_number(cj, "dt", "sim", issues, false)) s.sim.dt = *v;
            if (auto v = get_number(cj, "t_max", "sim", issues, false)) s.sim.t_max = *v;
            if (auto v = get_number(cj, "epsilon", "sim", issues, false)) s.sim.epsilon = *v;
            if (auto v = get_int(cj, "delay_steps", "sim", issues, false)) s.sim.delay_steps = *v;
            if (cj.contains("seed")) {
                if (!cj["seed"].is_number_integer() || cj["seed"].get<long long>() < 0) {
                    issues.add("sim.seed must be a nonnegative integer");
                } else {
                    s.sim.seed = cj["seed"].get<std::uint64_t>();
                }
            }
            s.sim.stop_on_convergence =
                get_bool(cj, "stop_on_convergence", "sim", issues, s.sim.stop_on_convergence);
        }
    }
    for (auto& problem : config_issues(s.sim)) issues.add(problem);

    // --- application --------------------------------------------------------
    if (!doc.contains("application") || !doc["application"].is_object()) {
        issues.add("application must be an object with a 'kind'");
    } else {
        const json& aj = doc["application"];
        if (auto kind = get_string(aj, "kind", "application", issues)) {
            s.application = application_kind_from_string(*kind, issues);
        }

        switch (s.application) {
            case ApplicationKind::consensus: {
                if (d_state > 1) issues.add("consensus needs scalar states (initial d = 1)");
                break;
            }
            case ApplicationKind::rendezvous: {
                if (d_state > 0 && d_state != 2 && d_state != 3) {
                    issues.add("rendezvous needs 2D or 3D states");
                }
                if (protocol_kind && *protocol_kind != ProtocolKind::unit_vector) {
                    issues.add("rendezvous uses the unit_vector protocol");
                }
                protocol_kind = ProtocolKind::unit_vector;
                break;
            }
            case ApplicationKind::estimation: {
                EstimationParams params;
                int m = -1;
                if (aj.contains("dynamics")) {
                    if (auto a = parse_matrix(aj["dynamics"], "application.dynamics", issues)) {
                        if (a->rows() != a->cols()) {
                            issues.add("application.dynamics must be square");
                        } else {
                            m = static_cast<int>(a->rows());
                            params.model.dynamics = std::move(*a);
                        }
                    }
                } else {
                    issues.add("application.dynamics is required for estimation");
                }
                if (aj.contains("H") && m > 0 && n_agents > 0) {
                    const json& hj = aj["H"];
                    const bool per_agent = hj.is_array() && !hj.empty() && hj[0].is_array() &&
                                           !hj[0].empty() && hj[0][0].is_array();
                    if (per_agent) {
                        if (static_cast<int>(hj.size()) != n_agents) {
                            issues.add("application.H must list one matrix per agent");
                        } else {
                            for (std::size_t k = 0; k < hj.size(); ++k) {
                                if (auto h = parse_matrix(
                                        hj[k], "application.H[" + std::to_string(k) + "]",
                                        issues)) {
                                    params.model.measurement.push_back(std::move(*h));
                                }
                            }
                        }
                    } else if (auto h = parse_matrix(hj, "application.H", issues)) {
                        params.model.measurement.assign(n_agents, *h);
                    }
                } else if (!aj.contains("H")) {
                    issues.add("application.H is required for estimation");
                }
                if (auto v = get_number(aj, "process_noise_std", "application", issues, false)) {
                    params.model.process_noise_std = *v;
                }
                if (aj.contains("measurement_noise_std") && n_agents > 0) {
                    const json& rj = aj["measurement_noise_std"];
                    if (rj.is_number()) {
                        params.model.measurement_noise_std.assign(n_agents, rj.get<double>());
                    } else if (auto v = parse_vector(rj, "application.measurement_noise_std",
                                                    issues)) {
                        params.model.measurement_noise_std.assign(v->data(),
                                                                  v->data() + v->size());
                    }
                } else if (n_agents > 0) {
                    params.model.measurement_noise_std.assign(n_agents, 0.0);
                }
                if (auto v = get_number(aj, "gain", "application", issues)) params.gain = *v;
                if (aj.contains("true_initial")) {
                    if (auto v = parse_vector(aj["true_initial"], "application.true_initial",
                                              issues)) {
                        params.true_initial = std::move(*v);
                    }
                } else {
                    issues.add("application.true_initial is required for estimation");
                }
                if (m > 0) {
                    if (n_agents > 0) {
                        for (auto& problem : params.model.issues(n_agents)) issues.add(problem);
                    }
                    if (params.true_initial.size() != 0 && params.true_initial.size() != m) {
                        issues.add("application.true_initial must have dimension " +
                                   std::to_string(m));
                    }
                    if (d_state > 0 && d_state != m) {
                        issues.add("initial_state dimension must equal the estimation state "
                                   "dimension " +
                                   std::to_string(m));
                    }
                }
                s.estimation = std::move(params);
                break;
            }
            case ApplicationKind::optimization: {
                OptimizationParams params;
                if (d_state > 1) issues.add("optimization needs scalar states (initial d = 1)");
                if (!aj.contains("objectives") || !aj["objectives"].is_array() ||
                    aj["objectives"].empty()) {
                    issues.add("application.objectives must be a nonempty array of {q, b}");
                } else {
                    for (std::size_t k = 0; k < aj["objectives"].size(); ++k) {
                        const std::string ctx = "application.objectives[" + std::to_string(k) + "]";
                        const json& oj = aj["objectives"][k];
                        if (!oj.is_object()) {
                            issues.add(ctx + " must be an object {q, b}");
                            continue;
                        }
                        auto q = get_number(oj, "q", ctx, issues);
                        auto b = get_number(oj, "b", ctx, issues);
                        if (q && !(*q > 0.0)) {
                            issues.add(ctx + ".q must be > 0 (strongly convex local terms)");
                            q.reset();
                        }
                        if (q && b) params.objectives.push_back({*q, *b});
                    }
                    if (n_agents > 0 && aj["objectives"].size() !=
                                            static_cast<std::size_t>(n_agents)) {
                        issues.add("application.objectives must list one objective per agent");
                    }
                }
                if (auto g = get_number(aj, "gamma", "application", issues, false)) {
                    if (!(*g > 0.0)) {
                        issues.add("application.gamma must be > 0");
                    } else {
                        params.gamma = *g;
                    }
                }
                if (aj.contains("step_size")) {
                    const json& ssj = aj["step_size"];
                    if (!ssj.is_object()) {
                        issues.add("application.step_size must be an object {kind, alpha0}");
                    } else {
                        if (auto kind = get_string(ssj, "kind", "application.step_size", issues)) {
                            if (*kind == "constant") {
                                params.step_size.kind = StepSizeSchedule::Kind::constant;
                            } else if (*kind == "diminishing") {
                                params.step_size.kind = StepSizeSchedule::Kind::diminishing;
                            } else {
                                issues.add("application.step_size.kind must be 'constant' or "
                                           "'diminishing'");
                            }
                        }
                        if (auto a0 = get_number(ssj, "alpha0", "application.step_size", issues)) {
                            if (!(*a0 > 0.0)) {
                                issues.add("application.step_size.alpha0 must be > 0");
                            } else {
                                params.step_size.alpha0 = *a0;
                            }
                        }
                    }
                }
                s.optimization = std::move(params);
                break;
            }
            case ApplicationKind::formation: {
                FormationParams params;
                if (d_state > 0 && d_state != 2 && d_state != 3) {
                    issues.add("formation needs 2D or 3D states");
                }
                if (aj.contains("distances") && n_agents > 0) {
                    if (auto dmat = parse_matrix(aj["distances"], "application.distances",
                                                 issues)) {
                        if (dmat->rows() != n_agents || dmat->cols() != n_agents) {
                            issues.add("application.distances must be n x n");
                        } else if ((dmat->array() < 0.0).any()) {
                            issues.add("application.distances must be nonnegative");
                        } else {
                            params.spec.target_distances = std::move(*dmat);
                        }
                    }
                } else if (!aj.contains("distances")) {
                    issues.add("application.distances is required for formation");
                }
                auto l1 = get_number(aj, "lambda1", "application", issues);
                auto l2 = get_number(aj, "lambda2", "application", issues);
                if (l1 && !(*l1 > 0.0 && *l1 < 1.0)) {
                    issues.add("application.lambda1 must be in (0, 1)");
                    l1.reset();
                }
                if (l2 && !(*l2 > 0.0 && *l2 < 1.0)) {
                    issues.add("application.lambda2 must be in (0, 1)");
                    l2.reset();
                }
                if (l1 && l2) {
                    if (std::abs(*l1 + *l2 - 1.0) > 1e-9) {
                        issues.add("application.lambda1 + lambda2 must equal 1");
                    } else {
                        params.spec.lambda1 = *l1;
                        params.spec.lambda2 = *l2;
                    }
                }
                if (auto u = get_number(aj, "speed", "application", issues, false)) {
                    if (!(*u > 0.0)) {
                        issues.add("application.speed must be > 0");
                    } else {
                        params.spec.speed = *u;
                    }
                }
                if (aj.contains("initial_velocities")) {
                    if (auto vmat = parse_matrix(aj["initial_velocities"],
                                                 "application.initial_velocities", issues)) {
                        if (n_agents > 0 && (vmat->rows() != n_agents ||
                                             (d_state > 0 && vmat->cols() != d_state))) {
                            issues.add("application.initial_velocities must match the initial "
                                       "state shape");
                        } else {
                            params.initial_velocities = std::move(*vmat);
                        }
                    }
                }
                // Target distances must agree across mutual edges in any topology.
                if (params.spec.target_distances.size() > 0 && !table.empty()) {
                    std::vector<Topology> all;
                    for (const auto& [id, topo] : table) all.push_back(topo);
                    const Topology united = topology_union(all);
                    for (int i = 0; i < n_agents; ++i) {
                        for (int j = i + 1; j < n_agents; ++j) {
                            if (united.weights()(i, j) > 0.0 && united.weights()(j, i) > 0.0 &&
                                params.spec.target_distances(i, j) !=
                                    params.spec.target_distances(j, i)) {
                                issues.add("application.distances must be symmetric for the "
                                           "mutual edge (" +
                                           std::to_string(i) + ", " + std::to_string(j) + ")");
                            }
                        }
                    }
                }
                s.formation = std::move(params);
                break;
            }
        }
    }

    // Default protocol per application.
    if (!protocol_kind) {
        protocol_kind = s.application == ApplicationKind::rendezvous ? ProtocolKind::unit_vector
                                                                     : ProtocolKind::sign;
    }
    if (s.application == ApplicationKind::consensus &&
        *protocol_kind == ProtocolKind::unit_vector) {
        issues.add("consensus scenarios use a scalar protocol (sign, saturated, or linear)");
    }
    if (s.application == ApplicationKind::rendezvous && d_state == 1) {
        issues.add("rendezvous needs 2D or 3D states");
    }

    if (!issues.ok()) throw ScenarioError(std::move(issues.list));

    s.protocol = Protocol{*protocol_kind, sat_radius};
    s.schedule = SwitchingSchedule(std::move(table), std::move(entries), mode);
    return s;
}

std::string emit_scenario(const Scenario& s) {
    json j;
    j["name"] = s.name;
    if (!s.description.empty()) j["description"] = s.description;

    json protocol;
    protocol["kind"] = to_string(s.protocol.kind);
    if (s.protocol.kind == ProtocolKind::saturated) protocol["radius"] = s.protocol.sat_radius;
    j["protocol"] = protocol;

    json topologies = json::object();
    for (const auto& [id, topo] : s.schedule.table()) {
        json t;
        t["n"] = topo.size();
        t["weights"] = matrix_to_json(topo.weights());
        topologies[id] = std::move(t);
    }
    j["topologies"] = std::move(topologies);

    json schedule;
    schedule["mode"] = s.schedule.mode() == ScheduleMode::cycle ? "cycle" : "once";
    json entries = json::array();
    for (const auto& entry : s.schedule.entries()) {
        entries.push_back({{"topology", entry.topology_id}, {"dwell", entry.dwell}});
    }
    schedule["entries"] = std::move(entries);
    j["schedule"] = std::move(schedule);

    json initial;
    if (s.initial.explicit_values) {
        initial["values"] = matrix_to_json(*s.initial.explicit_values);
    } else if (s.initial.uniform) {
        initial["uniform"] = {{"low", s.initial.uniform->low},
                              {"high", s.initial.uniform->high},
                              {"n", s.initial.uniform->n},
                              {"d", s.initial.uniform->d}};
    }
    j["initial_state"] = std::move(initial);

    j["sim"] = {{"dt", s.sim.dt},
                {"t_max", s.sim.t_max},
                {"epsilon", s.sim.epsilon},
                {"delay_steps", s.sim.delay_steps},
                {"seed", s.sim.seed},
                {"stop_on_convergence", s.sim.stop_on_convergence}};

    json app;
    app["kind"] = to_string(s.application);
    if (s.application == ApplicationKind::estimation && s.estimation) {
        app["dynamics"] = matrix_to_json(s.estimation->model.dynamics);
        json hs = json::array();
        for (const auto& h : s.estimation->model.measurement) hs.push_back(matrix_to_json(h));
        app["H"] = std::move(hs);
        app["process_noise_std"] = s.estimation->model.process_noise_std;
        app["measurement_noise_std"] = s.estimation->model.measurement_noise_std;
        app["gain"] = s.estimation->gain;
        app["true_initial"] = vector_to_json(s.estimation->true_initial);
    } else if (s.application == ApplicationKind::optimization && s.optimization) {
        json objectives = json::array();
        for (const auto& f : s.optimization->objectives) {
            objectives.push_back({{"q", f.curvature}, {"b", f.center}});
        }
        app["objectives"] = std::move(objectives);
        app["gamma"] = s.optimization->gamma;
        app["step_size"] = {
            {"kind", s.optimization->step_size.kind == StepSizeSchedule::Kind::constant
                         ? "constant"
                         : "diminishing"},
            {"alpha0", s.optimization->step_size.alpha0}};
    } else if (s.application == ApplicationKind::formation && s.formation) {
        app["distances"] = matrix_to_json(s.formation->spec.target_distances);
        app["lambda1"] = s.formation->spec.lambda1;
        app["lambda2"] = s.formation->spec.lambda2;
        app["speed"] = s.formation->spec.speed;
        if (s.formation->initial_velocities) {
            app["initial_velocities"] = matrix_to_json(*s.formation->initial_velocities);
        }
    }
    j["application"] = std::move(app);

    return j.dump(2);
}

namespace {

struct BundledEntry {
    const char* name;
    const char* text;
};

const BundledEntry kBundled[] = {
    {"paper_fig2", R"JSON({
  "name": "paper_fig2",
  "description": "10 agents under the sign protocol; four topologies switching every 0.4 s whose 0.8 s unions keep a spanning tree",
  "protocol": {"kind": "sign"},
  "topologies": {
    "G1": {"n": 10, "undirected": true, "edges": [
      {"from": 0, "to": 1}, {"from": 1, "to": 2}, {"from": 2, "to": 3},
      {"from": 3, "to": 4}, {"from": 4, "to": 5}, {"from": 5, "to": 6},
      {"from": 6, "to": 7}, {"from": 7, "to": 8}, {"from": 8, "to": 9},
      {"from": 9, "to": 0}]},
    "G2": {"n": 10, "edges": [
      {"from": 0, "to": 1}, {"from": 1, "to": 2}, {"from": 2, "to": 3},
      {"from": 3, "to": 4}, {"from": 5, "to": 6}, {"from": 6, "to": 7},
      {"from": 7, "to": 8}, {"from": 8, "to": 9}, {"from": 2, "to": 7}]},
    "G3": {"n": 10, "edges": [
      {"from": 0, "to": 1}, {"from": 1, "to": 2}, {"from": 2, "to": 3},
      {"from": 3, "to": 4}, {"from": 4, "to": 5}, {"from": 5, "to": 6},
      {"from": 6, "to": 7}, {"from": 7, "to": 8}, {"from": 8, "to": 9},
      {"from": 9, "to": 0}]},
    "G4": {"n": 10, "edges": [
      {"from": 0, "to": 1}, {"from": 1, "to": 2}, {"from": 2, "to": 3},
      {"from": 3, "to": 4}, {"from": 5, "to": 6}, {"from": 6, "to": 7},
      {"from": 7, "to": 8}, {"from": 8, "to": 9}]}
  },
  "schedule": {"mode": "cycle", "entries": [
    {"topology": "G1", "dwell": 0.4}, {"topology": "G2", "dwell": 0.4},
    {"topology": "G3", "dwell": 0.4}, {"topology": "G4", "dwell": 0.4}]},
  "initial_state": {"uniform": {"low": 0.0, "high": 10.0, "n": 10, "d": 1}},
  "sim": {"dt": 0.001, "t_max": 12.0, "epsilon": 0.01, "delay_steps": 0, "seed": 42,
          "stop_on_convergence": true},
  "application": {"kind": "consensus"}
})JSON"},
    {"static_tree", R"JSON({
  "name": "static_tree",
  "description": "5-agent undirected star under the sign protocol; satisfies the tight finite-time bound",
  "protocol": {"kind": "sign"},
  "topologies": {
    "star": {"n": 5, "undirected": true, "edges": [
      {"from": 0, "to": 1}, {"from": 0, "to": 2}, {"from": 0, "to": 3},
      {"from": 0, "to": 4}]}
  },
  "schedule": {"mode": "cycle", "entries": [{"topology": "star", "dwell": 1.0}]},
  "initial_state": {"uniform": {"low": 0.0, "high": 10.0, "n": 5, "d": 1}},
  "sim": {"dt": 0.001, "t_max": 20.0, "epsilon": 0.01, "delay_steps": 0, "seed": 54,
          "stop_on_convergence": true},
  "application": {"kind": "consensus"}
})JSON"},
    {"disconnected", R"JSON({
  "name": "disconnected",
  "description": "two isolated pairs with different means; consensus is impossible",
  "protocol": {"kind": "sign"},
  "topologies": {
    "pairs": {"n": 4, "undirected": true, "edges": [
      {"from": 0, "to": 1}, {"from": 2, "to": 3}]}
  },
  "schedule": {"mode": "cycle", "entries": [{"topology": "pairs", "dwell": 1.0}]},
  "initial_state": {"values": [[0.0], [1.0], [5.0], [6.0]]},
  "sim": {"dt": 0.001, "t_max": 50.0, "epsilon": 0.01, "delay_steps": 0, "seed": 1,
          "stop_on_convergence": true},
  "application": {"kind": "consensus"}
})JSON"},
    {"delay_chattering", R"JSON({
  "name": "delay_chattering",
  "description": "5-agent complete graph with 20 steps of neighbor delay; runs the full horizon to expose chattering",
  "protocol": {"kind": "sign"},
  "topologies": {
    "complete": {"n": 5, "weights": [
      [0, 1, 1, 1, 1], [1, 0, 1, 1, 1], [1, 1, 0, 1, 1],
      [1, 1, 1, 0, 1], [1, 1, 1, 1, 0]]}
  },
  "schedule": {"mode": "cycle", "entries": [{"topology": "complete", "dwell": 1.0}]},
  "initial_state": {"uniform": {"low": 0.0, "high": 10.0, "n": 5, "d": 1}},
  "sim": {"dt": 0.005, "t_max": 4.0, "epsilon": 0.01, "delay_steps": 20, "seed": 3,
          "stop_on_convergence": false},
  "application": {"kind": "consensus"}
})JSON"},
    {"rendezvous_2d", R"JSON({
  "name": "rendezvous_2d",
  "description": "two agents 10 apart in the plane meeting at the midpoint",
  "protocol": {"kind": "unit_vector"},
  "topologies": {
    "pair": {"n": 2, "undirected": true, "edges": [{"from": 0, "to": 1}]}
  },
  "schedule": {"mode": "cycle", "entries": [{"topology": "pair", "dwell": 1.0}]},
  "initial_state": {"values": [[0.0, 0.0], [10.0, 0.0]]},
  "sim": {"dt": 0.001, "t_max": 8.0, "epsilon": 0.01, "delay_steps": 0, "seed": 1,
          "stop_on_convergence": true},
  "application": {"kind": "rendezvous"}
})JSON"},
    {"optimization_quadratic", R"JSON({
  "name": "optimization_quadratic",
  "description": "two agents minimizing the average of two quadratics with diminishing steps",
  "topologies": {
    "pair": {"n": 2, "undirected": true, "edges": [{"from": 0, "to": 1}]}
  },
  "schedule": {"mode": "cycle", "entries": [{"topology": "pair", "dwell": 1.0}]},
  "initial_state": {"values": [[0.0], [2.0]]},
  "sim": {"dt": 1.0, "t_max": 400.0, "epsilon": 0.01, "delay_steps": 0, "seed": 1,
          "stop_on_convergence": false},
  "application": {"kind": "optimization",
    "objectives": [{"q": 1.0, "b": 0.0}, {"q": 1.0, "b": 2.0}],
    "gamma": 1.0,
    "step_size": {"kind": "diminishing", "alpha0": 0.5}}
})JSON"},
    {"formation_triangle", R"JSON({
  "name": "formation_triangle",
  "description": "three agents forming a unit equilateral triangle from random positions in the unit box",
  "topologies": {
    "complete": {"n": 3, "weights": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]}
  },
  "schedule": {"mode": "cycle", "entries": [{"topology": "complete", "dwell": 1.0}]},
  "initial_state": {"uniform": {"low": 0.0, "high": 1.0, "n": 3, "d": 2}},
  "sim": {"dt": 0.001, "t_max": 40.0, "epsilon": 0.05, "delay_steps": 0, "seed": 5,
          "stop_on_convergence": false},
  "application": {"kind": "formation",
    "distances": [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]],
    "lambda1": 0.5, "lambda2": 0.5, "speed": 1.0}
})JSON"},
    {"estimation_scalar", R"JSON({
  "name": "estimation_scalar",
  "description": "three agents tracking a static scalar parameter from noisy unit measurements",
  "topologies": {
    "ring": {"n": 3, "undirected": true, "edges": [
      {"from": 0, "to": 1}, {"from": 1, "to": 2}, {"from": 2, "to": 0}]}
  },
  "schedule": {"mode": "cycle", "entries": [{"topology": "ring", "dwell": 1.0}]},
  "initial_state": {"values": [[0.0], [2.0], [5.0]]},
  "sim": {"dt": 1.0, "t_max": 200.0, "epsilon": 0.01, "delay_steps": 0, "seed": 17,
          "stop_on_convergence": false},
  "application": {"kind": "estimation",
    "dynamics": [[1.0]],
    "H": [[1.0]],
    "process_noise_std": 0.0,
    "measurement_noise_std": 0.05,
    "gain": 0.05,
    "true_initial": [4.0]}
})JSON"},
};

}  // namespace

std::vector<std::string> bundled_scenario_names() {
    std::vector<std::string> names;
    for (const auto& entry : kBundled) names.push_back(entry.name);
    return names;
}

Scenario bundled_scenario(const std::string& name) {
    for (const auto& entry : kBundled) {
        if (name == entry.name) return parse_scenario(entry.text);
    }
    throw ScenarioError({"no bundled scenario named '" + name + "'"});
}

std::vector<Scenario> bundled_scenarios() {
    std::vector<Scenario> out;
    for (const auto& entry : kBundled) out.push_back(parse_scenario(entry.text));
    return out;
}

}  // namespace consim
