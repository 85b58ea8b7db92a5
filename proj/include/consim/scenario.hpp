#pragma once

#include "consim/applications.hpp"
#include "consim/graph.hpp"
#include "consim/protocol.hpp"
#include "consim/simulator.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace consim {

enum class ApplicationKind { consensus, rendezvous, estimation, optimization, formation };
std::string to_string(ApplicationKind kind);

// Either an explicit n x d matrix or a seeded uniform box (seed comes from
// SimConfig; values are drawn agent-major, dimension-minor).
struct InitialStateSpec {
    std::optional<Eigen::MatrixXd> explicit_values;
    struct UniformBox {
        double low = 0.0;
        double high = 1.0;
        int n = 0;
        int d = 1;
    };
    std::optional<UniformBox> uniform;
};

struct FormationParams {
    FormationSpec spec;
    std::optional<Eigen::MatrixXd> initial_velocities;  // zeros when absent
};

// Full experiment description; see the scenario schema in the README.
struct Scenario {
    std::string name;
    std::string description;
    Protocol protocol;
    SwitchingSchedule schedule;
    InitialStateSpec initial;
    SimConfig sim;
    ApplicationKind application = ApplicationKind::consensus;
    std::optional<EstimationParams> estimation;
    std::optional<OptimizationParams> optimization;
    std::optional<FormationParams> formation;
};

// Carries the complete list of validation problems; what() joins them.
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

// Parses and fully validates a JSON scenario document. Throws ScenarioError
// listing every violation (syntax errors report line and column).
Scenario parse_scenario(const std::string& text);

// Serializes back to the schema parse_scenario accepts.
std::string emit_scenario(const Scenario& scenario);

// Draws or copies the initial state (uses sim.seed for uniform boxes).
SwarmState materialize_initial_state(const Scenario& scenario);

std::vector<std::string> bundled_scenario_names();
Scenario bundled_scenario(const std::string& name);
std::vector<Scenario> bundled_scenarios();

// Dispatches to the consensus loop or the matching application driver.
Trace run_scenario(const Scenario& scenario);

}  // namespace consim
