#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace consim {

// Directed weighted communication topology over n agents.
//
// Convention used throughout: weight(i, j) > 0 means agent i listens to
// agent j, i.e. information flows j -> i and j is in the neighborhood of i.
// Weights are nonnegative; the diagonal is zero (no self-loops). An all-zero
// matrix is the explicit empty topology.
class Topology {
public:
    struct Edge {
        int from = 0;      // information source
        int to = 0;        // information sink (the listener)
        double weight = 1.0;
    };

    // Explicit empty topology on n agents.
    explicit Topology(int n);

    static Topology from_weights(Eigen::MatrixXd weights);
    // Edge {from, to, w} sets weight(to, from) = w; with undirected also
    // weight(from, to) = w.
    static Topology from_edges(int n, const std::vector<Edge>& edges, bool undirected = false);

    static Topology complete(int n, double weight = 1.0);
    static Topology ring(int n, double weight = 1.0, bool directed = false);
    static Topology star(int n, double weight = 1.0);
    static Topology line(int n, double weight = 1.0, bool directed = false);

    int size() const { return static_cast<int>(weights_.rows()); }
    double weight(int i, int j) const;
    const Eigen::MatrixXd& weights() const { return weights_; }

    // { j : weight(i, j) > 0 }, ascending.
    std::vector<int> neighbors(int i) const;
    // { i : weight(i, j) > 0 }, ascending: the agents information from j reaches.
    std::vector<int> listeners(int j) const;
    bool empty() const;

private:
    explicit Topology(Eigen::MatrixXd weights) : weights_(std::move(weights)) {}
    Eigen::MatrixXd weights_;
};

bool operator==(const Topology& a, const Topology& b);

// True iff some root agent's information reaches every agent following
// chains of listened-to edges (search over the transposed positive support).
bool has_spanning_tree(const Topology& topology);

// Smallest strictly positive weight; throws std::domain_error on an empty topology.
double min_positive_weight(const Topology& topology);

// Entrywise maximum of the weight matrices. All members must share n.
Topology topology_union(const std::vector<Topology>& topologies);

// True iff every agent both listens to someone and is listened to by someone.
bool every_agent_has_in_and_out(const Topology& topology);

enum class ScheduleMode { cycle, once };

struct ScheduleEntry {
    std::string topology_id;
    double dwell = 0.0;  // seconds, > 0
};

// Time-indexed sequence of topologies. Dwell intervals are half-open
// [start, end); in cycle mode time is reduced modulo the schedule period,
// in once mode the final topology is held beyond the last entry.
class SwitchingSchedule {
public:
    SwitchingSchedule() = default;  // empty; populate before use
    SwitchingSchedule(std::map<std::string, Topology> table,
                      std::vector<ScheduleEntry> entries,
                      ScheduleMode mode);

    static SwitchingSchedule single(Topology topology, std::string id = "static");

    const Topology& topology_at(double t) const;
    const std::string& id_at(double t) const;
    double period() const;  // sum of dwells
    int agent_count() const;
    ScheduleMode mode() const { return mode_; }
    const std::vector<ScheduleEntry>& entries() const { return entries_; }
    const std::map<std::string, Topology>& table() const { return table_; }
    const Topology& topology(const std::string& id) const;

    // Distinct topology ids active anywhere in [begin, end), in order of
    // first activation.
    std::vector<std::string> active_ids(double begin, double end) const;

private:
    std::size_t entry_index_at(double t) const;

    std::map<std::string, Topology> table_;
    std::vector<ScheduleEntry> entries_;
    std::vector<double> boundaries_;  // cumulative dwell boundaries, size entries + 1
    ScheduleMode mode_ = ScheduleMode::cycle;
};

// Certificate for consensus under switching: true iff the union of the
// topologies active during every aligned window [k*window, (k+1)*window)
// inside the horizon has a spanning tree.
bool windowed_union_has_spanning_tree(const SwitchingSchedule& schedule,
                                      double window, double horizon);

}  // namespace consim
