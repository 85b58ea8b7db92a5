#include "consim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace consim {

namespace {

void check_index(int i, int n, const char* what) {
    if (i < 0 || i >= n) {
        throw std::domain_error(std::string(what) + ": agent index " + std::to_string(i) +
                                " out of range [0, " + std::to_string(n) + ")");
    }
}

}  // namespace

Topology::Topology(int n) {
    if (n < 1) throw std::domain_error("Topology: agent count must be positive");
    weights_ = Eigen::MatrixXd::Zero(n, n);
}

Topology Topology::from_weights(Eigen::MatrixXd weights) {
    if (weights.rows() < 1 || weights.rows() != weights.cols()) {
        throw std::domain_error("Topology: weight matrix must be square and nonempty");
    }
    if (!weights.allFinite()) throw std::domain_error("Topology: weights must be finite");
    const int n = static_cast<int>(weights.rows());
    for (int i = 0; i < n; ++i) {
        if (weights(i, i) != 0.0) {
            throw std::domain_error("Topology: self-loop weight at agent " + std::to_string(i));
        }
        for (int j = 0; j < n; ++j) {
            if (weights(i, j) < 0.0) {
                throw std::domain_error("Topology: negative weight at (" + std::to_string(i) +
                                        ", " + std::to_string(j) + ")");
            }
        }
    }
    return Topology(std::move(weights));
}

Topology Topology::from_edges(int n, const std::vector<Edge>& edges, bool undirected) {
    if (n < 1) throw std::domain_error("Topology: agent count must be positive");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : edges) {
        check_index(e.from, n, "Topology::from_edges");
        check_index(e.to, n, "Topology::from_edges");
        if (e.from == e.to) throw std::domain_error("Topology: self-loop edge");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw std::domain_error("Topology: edge weight must be positive and finite");
        }
        w(e.to, e.from) = e.weight;
        if (undirected) w(e.from, e.to) = e.weight;
    }
    return Topology(std::move(w));
}

Topology Topology::complete(int n, double weight) {
    Topology t(n);
    t.weights_.setConstant(weight);
    t.weights_.diagonal().setZero();
    return from_weights(t.weights_);
}

Topology Topology::ring(int n, double weight, bool directed) {
    if (n < 2) throw std::domain_error("Topology::ring: need at least 2 agents");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight});
    return from_edges(n, edges, !directed);
}

Topology Topology::star(int n, double weight) {
    if (n < 2) throw std::domain_error("Topology::star: need at least 2 agents");
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({0, i, weight});
    return from_edges(n, edges, true);
}

Topology Topology::line(int n, double weight, bool directed) {
    if (n < 2) throw std::domain_error("Topology::line: need at least 2 agents");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    return from_edges(n, edges, !directed);
}

double Topology::weight(int i, int j) const {
    check_index(i, size(), "Topology::weight");
    check_index(j, size(), "Topology::weight");
    return weights_(i, j);
}

std::vector<int> Topology::neighbors(int i) const {
    check_index(i, size(), "Topology::neighbors");
    std::vector<int> out;
    for (int j = 0; j < size(); ++j) {
        if (weights_(i, j) > 0.0) out.push_back(j);
    }
    return out;
}

std::vector<int> Topology::listeners(int j) const {
    check_index(j, size(), "Topology::listeners");
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
        if (weights_(i, j) > 0.0) out.push_back(i);
    }
    return out;
}

bool Topology::empty() const { return (weights_.array() > 0.0).count() == 0; }

bool operator==(const Topology& a, const Topology& b) {
    return a.size() == b.size() && a.weights() == b.weights();
}

bool has_spanning_tree(const Topology& topology) {
    const int n = topology.size();
    if (n == 1) return true;
    // Adjacency in information-flow direction: flow[j] holds the agents that
    // hear j directly.
    std::vector<std::vector<int>> flow(n);
    for (int j = 0; j < n; ++j) flow[j] = topology.listeners(j);
    std::vector<char> visited(n);
    std::deque<int> queue;
    for (int root = 0; root < n; ++root) {
        std::fill(visited.begin(), visited.end(), 0);
        visited[root] = 1;
        int count = 1;
        queue.assign(1, root);
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : flow[u]) {
                if (!visited[v]) {
                    visited[v] = 1;
                    ++count;
                    queue.push_back(v);
                }
            }
        }
        if (count == n) return true;
    }
    return false;
}

double min_positive_weight(const Topology& topology) {
    double best = std::numeric_limits<double>::infinity();
    const auto& w = topology.weights();
    for (int i = 0; i < topology.size(); ++i) {
        for (int j = 0; j < topology.size(); ++j) {
            if (w(i, j) > 0.0) best = std::min(best, w(i, j));
        }
    }
    if (!std::isfinite(best)) {
        throw std::domain_error("min_positive_weight: topology has no positive weights");
    }
    return best;
}

Topology topology_union(const std::vector<Topology>& topologies) {
    if (topologies.empty()) throw std::domain_error("topology_union: empty list");
    Eigen::MatrixXd acc = topologies.front().weights();
    for (std::size_t k = 1; k < topologies.size(); ++k) {
        if (topologies[k].size() != topologies.front().size()) {
            throw std::domain_error("topology_union: mismatched agent counts");
        }
        acc = acc.cwiseMax(topologies[k].weights());
    }
    return Topology::from_weights(std::move(acc));
}

bool every_agent_has_in_and_out(const Topology& topology) {
    const auto& w = topology.weights();
    for (int i = 0; i < topology.size(); ++i) {
        if ((w.row(i).array() > 0.0).count() == 0) return false;  // listens to nobody
        if ((w.col(i).array() > 0.0).count() == 0) return false;  // heard by nobody
    }
    return true;
}

SwitchingSchedule::SwitchingSchedule(std::map<std::string, Topology> table,
                                     std::vector<ScheduleEntry> entries,
                                     ScheduleMode mode)
    : table_(std::move(table)), entries_(std::move(entries)), mode_(mode) {
    if (entries_.empty()) throw std::domain_error("SwitchingSchedule: no entries");
    int n = -1;
    for (const auto& [id, topo] : table_) {
        if (n < 0) n = topo.size();
        if (topo.size() != n) {
            throw std::domain_error("SwitchingSchedule: topology '" + id +
                                    "' has mismatched agent count");
        }
    }
    boundaries_.assign(1, 0.0);
    for (const auto& entry : entries_) {
        if (!(entry.dwell > 0.0) || !std::isfinite(entry.dwell)) {
            throw std::domain_error("SwitchingSchedule: dwell must be positive for '" +
                                    entry.topology_id + "'");
        }
        if (table_.find(entry.topology_id) == table_.end()) {
            throw std::domain_error("SwitchingSchedule: unknown topology id '" +
                                    entry.topology_id + "'");
        }
        boundaries_.push_back(boundaries_.back() + entry.dwell);
    }
}

SwitchingSchedule SwitchingSchedule::single(Topology topology, std::string id) {
    std::map<std::string, Topology> table;
    table.emplace(id, std::move(topology));
    return SwitchingSchedule(std::move(table), {{std::move(id), 1.0}}, ScheduleMode::cycle);
}

double SwitchingSchedule::period() const { return boundaries_.empty() ? 0.0 : boundaries_.back(); }

int SwitchingSchedule::agent_count() const {
    if (table_.empty()) throw std::logic_error("SwitchingSchedule: empty schedule");
    return table_.begin()->second.size();
}

const Topology& SwitchingSchedule::topology(const std::string& id) const {
    auto it = table_.find(id);
    if (it == table_.end()) {
        throw std::domain_error("SwitchingSchedule: unknown topology id '" + id + "'");
    }
    return it->second;
}

std::size_t SwitchingSchedule::entry_index_at(double t) const {
    if (entries_.empty()) throw std::logic_error("SwitchingSchedule: empty schedule");
    if (t < 0.0 || !std::isfinite(t)) {
        throw std::domain_error("SwitchingSchedule: time must be finite and >= 0");
    }
    double local = t;
    if (mode_ == ScheduleMode::cycle) {
        local = std::fmod(t, period());
    } else if (t >= period()) {
        return entries_.size() - 1;  // hold the last topology
    }
    // boundaries_[k] <= local < boundaries_[k+1]
    auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), local);
    std::size_t idx = static_cast<std::size_t>(it - boundaries_.begin());
    if (idx == 0) return 0;
    idx -= 1;
    return std::min(idx, entries_.size() - 1);
}

const Topology& SwitchingSchedule::topology_at(double t) const {
    return topology(entries_[entry_index_at(t)].topology_id);
}

const std::string& SwitchingSchedule::id_at(double t) const {
    return entries_[entry_index_at(t)].topology_id;
}

std::vector<std::string> SwitchingSchedule::active_ids(double begin, double end) const {
    if (begin < 0.0 || end < begin) {
        throw std::domain_error("SwitchingSchedule::active_ids: bad interval");
    }
    std::vector<std::string> ids;
    if (end == begin) return ids;

    // Walk segments by index with a remaining-duration budget; absolute times
    // are never re-derived, so boundary rounding cannot stall the walk.
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t idx = entry_index_at(begin);
    double seg_left;
    if (mode_ == ScheduleMode::once && idx + 1 == entries_.size()) {
        seg_left = inf;  // final topology held forever
    } else {
        const double local =
            mode_ == ScheduleMode::cycle ? std::fmod(begin, period()) : begin;
        seg_left = boundaries_[idx + 1] - local;
    }

    double remaining = end - begin;
    while (true) {
        const std::string& id = entries_[idx].topology_id;
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
        if (seg_left >= remaining) break;
        remaining -= seg_left;
        if (mode_ == ScheduleMode::once) {
            if (idx + 1 == entries_.size()) break;
            ++idx;
            seg_left = idx + 1 == entries_.size() ? inf : entries_[idx].dwell;
        } else {
            idx = (idx + 1) % entries_.size();
            seg_left = entries_[idx].dwell;
        }
    }
    return ids;
}

bool windowed_union_has_spanning_tree(const SwitchingSchedule& schedule,
                                      double window, double horizon) {
    if (!(window > 0.0)) throw std::domain_error("windowed_union: window must be > 0");
    if (horizon < window) throw std::domain_error("windowed_union: horizon must cover a window");
    const long count = static_cast<long>(std::floor(horizon / window + 1e-12));
    for (long k = 0; k < count; ++k) {
        const double a = static_cast<double>(k) * window;
        const double b = static_cast<double>(k + 1) * window;
        std::vector<Topology> active;
        for (const std::string& id : schedule.active_ids(a, b)) {
            active.push_back(schedule.topology(id));
        }
        if (active.empty()) return false;
        if (!has_spanning_tree(topology_union(active))) return false;
    }
    return true;
}

}  // namespace consim
