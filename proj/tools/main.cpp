#include "consim/scenario.hpp"
#include "consim/trace_io.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace consim;

Scenario load_scenario(const std::string& arg) {
    const std::filesystem::path path(arg);
    if (std::filesystem::exists(path)) {
        if (!std::filesystem::is_regular_file(path)) {
            throw std::runtime_error(arg + " is not a regular file");
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read " + arg);
        std::ostringstream text;
        text << in.rdbuf();
        return parse_scenario(text.str());
    }
    const auto names = bundled_scenario_names();
    for (const std::string& name : names) {
        if (name == arg) return bundled_scenario(name);
    }
    if (arg.find('.') != std::string::npos || arg.find('/') != std::string::npos) {
        throw std::runtime_error("scenario file not found: " + arg);
    }
    throw std::runtime_error("no scenario file or bundled scenario named '" + arg +
                             "' (see 'consim list')");
}

std::filesystem::path default_out_dir(const std::string& scenario_name) {
    if (const char* env = std::getenv("CONSIM_OUT_DIR")) {
        return std::filesystem::path(env) / scenario_name;
    }
    return std::filesystem::path("runs") / scenario_name;
}

void apply_overrides(Scenario& scenario, const std::optional<std::uint64_t>& seed,
                     const std::optional<double>& dt, const std::optional<double>& tmax) {
    if (seed) scenario.sim.seed = *seed;
    if (dt) scenario.sim.dt = *dt;
    if (tmax) scenario.sim.t_max = *tmax;
    auto issues = config_issues(scenario.sim);
    if (!issues.empty()) throw ScenarioError(issues);
}

// Smallest positive weight over every topology in the schedule, if any.
std::optional<double> schedule_min_weight(const SwitchingSchedule& schedule) {
    std::vector<Topology> all;
    for (const auto& [id, topo] : schedule.table()) all.push_back(topo);
    const Topology united = topology_union(all);
    if (united.empty()) return std::nullopt;
    return min_positive_weight(united);
}

void print_consensus_summary(const Scenario& scenario, const Trace& trace) {
    const auto crossing = trace.first_convergence_time();
    if (crossing) {
        std::cout << "converged: V <= " << format_double(scenario.sim.epsilon) << " at t="
                  << format_double(*crossing) << " s\n";
    } else {
        std::cout << "not converged by t=" << format_double(trace.times.back()) << " s (final V="
                  << format_double(trace.lyapunov.back()) << ")\n";
    }
    if (scenario.application != ApplicationKind::consensus) return;
    const auto w_min = schedule_min_weight(scenario.schedule);
    if (!w_min) return;
    const SwarmState x0 = materialize_initial_state(scenario);
    const BoundReport report =
        bound_report(trace, lyapunov_scalar(x0), *w_min, scenario.sim.epsilon);
    std::cout << "finite-time bounds: tight=" << format_double(report.tight_bound)
              << " s, loose=" << format_double(report.loose_bound) << " s";
    if (report.first_crossing) {
        std::cout << " -> met " << (report.within_tight ? "tight" : report.within_loose
                                        ? "loose only" : "neither");
    }
    std::cout << "\n";
}

int cmd_run(const std::string& scenario_arg, std::optional<std::string> out,
            std::optional<std::uint64_t> seed, std::optional<double> dt,
            std::optional<double> tmax) {
    Scenario scenario = load_scenario(scenario_arg);
    apply_overrides(scenario, seed, dt, tmax);
    const std::filesystem::path dir = out ? std::filesystem::path(*out)
                                          : default_out_dir(scenario.name);
    const Trace trace = run_scenario(scenario);
    const auto written = emit_plots(trace, dir);

    std::cout << "scenario: " << scenario.name << " (" << to_string(scenario.application)
              << ", " << to_string(scenario.protocol.kind) << " protocol)\n";
    std::cout << "samples: " << trace.size() << ", events: " << trace.events.size() << "\n";
    print_consensus_summary(scenario, trace);
    std::cout << "wrote:\n";
    for (const auto& path : written) std::cout << "  " << path.string() << "\n";
    return 0;
}

int cmd_check(const std::string& scenario_arg, std::optional<double> window,
              std::optional<double> horizon) {
    const Scenario scenario = load_scenario(scenario_arg);
    const SwitchingSchedule& schedule = scenario.schedule;

    std::cout << "scenario: " << scenario.name << "\n";
    std::cout << "agents: " << schedule.agent_count() << ", schedule period: "
              << format_double(schedule.period()) << " s ("
              << (schedule.mode() == ScheduleMode::cycle ? "cycle" : "once") << ")\n\n";

    for (const auto& [id, topo] : schedule.table()) {
        std::cout << "topology " << id << ": ";
        std::cout << (has_spanning_tree(topo) ? "spanning tree" : "NO spanning tree");
        if (!topo.empty()) {
            std::cout << ", min positive weight " << format_double(min_positive_weight(topo));
        }
        if (every_agent_has_in_and_out(topo)) {
            std::cout << ", every agent has in- and out-neighbors";
        }
        std::cout << "\n";
    }

    const double w = window.value_or(schedule.period());
    const double h = horizon.value_or(std::max(scenario.sim.t_max, w));
    const bool certified = windowed_union_has_spanning_tree(schedule, w, h);
    std::cout << "\nwindowed union over " << format_double(w) << " s windows (horizon "
              << format_double(h) << " s): "
              << (certified ? "every window has a spanning tree"
                            : "no spanning tree in some window")
              << "\n";
    if (!certified) {
        const long count = static_cast<long>(h / w);
        for (long k = 0; k < count; ++k) {
            std::vector<Topology> active;
            for (const auto& id : schedule.active_ids(k * w, (k + 1) * w)) {
                active.push_back(schedule.topology(id));
            }
            if (active.empty() || !has_spanning_tree(topology_union(active))) {
                std::cout << "  first failing window: [" << format_double(k * w) << ", "
                          << format_double((k + 1) * w) << ")\n";
                break;
            }
        }
    }

    // Worst-case convergence-time formulas for the scalar consensus case.
    if (scenario.application == ApplicationKind::consensus) {
        const SwarmState x0 = materialize_initial_state(scenario);
        const double range = lyapunov_scalar(x0);
        std::cout << "\ninitial range: " << format_double(range) << "\n";
        if (const auto w_min = schedule_min_weight(schedule)) {
            std::cout << "min positive weight (union): " << format_double(*w_min) << "\n";
            std::cout << "bound (both extremes move): " << format_double(range / (2.0 * *w_min))
                      << " s\n";
            std::cout << "bound (one extreme moves):  " << format_double(range / *w_min)
                      << " s\n";
            std::vector<Topology> all;
            for (const auto& [id, topo] : schedule.table()) all.push_back(topo);
            std::cout << "tight bound applicable to the union: "
                      << (every_agent_has_in_and_out(topology_union(all)) ? "yes" : "no")
                      << "\n";
        } else {
            std::cout << "no edges anywhere in the schedule; no bound applies\n";
        }
    }
    return 0;
}

int cmd_compare(const std::string& scenario_arg, const std::string& protocols_csv,
                std::optional<std::string> out) {
    Scenario scenario = load_scenario(scenario_arg);
    if (scenario.application != ApplicationKind::consensus) {
        throw std::runtime_error("compare works on consensus scenarios (scalar states)");
    }

    std::vector<Protocol> protocols;
    std::vector<std::string> labels;
    std::stringstream ss(protocols_csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        if (token == "sign") {
            protocols.push_back(Protocol::sign());
        } else if (token == "linear") {
            protocols.push_back(Protocol::linear());
        } else if (token == "saturated") {
            protocols.push_back(Protocol::saturated(
                scenario.protocol.kind == ProtocolKind::saturated ? scenario.protocol.sat_radius
                                                                  : 1.0));
        } else if (token.rfind("saturated:", 0) == 0) {
            protocols.push_back(Protocol::saturated(std::stod(token.substr(10))));
        } else {
            throw std::runtime_error("unknown protocol '" + token +
                                     "' (use sign, linear, saturated[:radius])");
        }
        labels.push_back(token == "saturated" || token.rfind("saturated:", 0) == 0 ? "saturated"
                                                                                   : token);
    }
    if (protocols.empty()) throw std::runtime_error("no protocols given");

    // Shared initial state and full horizon so the overlays align.
    const SwarmState x0 = materialize_initial_state(scenario);
    SimConfig cfg = scenario.sim;
    cfg.stop_on_convergence = false;

    std::vector<std::pair<std::string, Trace>> traces;
    for (std::size_t k = 0; k < protocols.size(); ++k) {
        Trace trace = run_consensus(x0, scenario.schedule, protocols[k], cfg);
        const auto crossing = trace.first_convergence_time();
        std::cout << labels[k] << ": "
                  << (crossing ? "converged at t=" + format_double(*crossing) + " s"
                               : "not converged (final V=" +
                                     format_double(trace.lyapunov.back()) + ")")
                  << "\n";
        traces.push_back({labels[k], std::move(trace)});
    }

    const std::filesystem::path dir = out ? std::filesystem::path(*out)
                                          : default_out_dir(scenario.name + "_compare");
    const auto written = emit_compare_plots(traces, dir);
    std::cout << "wrote:\n";
    for (const auto& path : written) std::cout << "  " << path.string() << "\n";
    return 0;
}

int cmd_list() {
    for (const Scenario& s : bundled_scenarios()) {
        std::cout << s.name << "\n    " << s.description << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-bit consensus protocol simulator"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> tmax;

    CLI::App* run = app.add_subcommand("run", "simulate a scenario and emit trace + plots");
    run->add_option("scenario", scenario_arg, "scenario file or bundled name")->required();
    run->add_option("--out", out, "output directory (default $CONSIM_OUT_DIR or runs/<name>)");
    run->add_option("--seed", seed, "override sim.seed");
    run->add_option("--dt", dt, "override sim.dt");
    run->add_option("--tmax", tmax, "override sim.t_max");

    std::optional<double> window;
    std::optional<double> horizon;
    CLI::App* check = app.add_subcommand(
        "check", "print spanning-tree, windowed-union, and bound diagnostics");
    check->add_option("scenario", scenario_arg, "scenario file or bundled name")->required();
    check->add_option("--window", window, "union window in seconds (default: schedule period)");
    check->add_option("--horizon", horizon, "check horizon in seconds (default: sim.t_max)");

    std::string protocols_csv = "sign,linear";
    CLI::App* compare = app.add_subcommand(
        "compare", "run several protocols from one initial state and overlay V(t)");
    compare->add_option("scenario", scenario_arg, "scenario file or bundled name")->required();
    compare->add_option("--protocols", protocols_csv,
                        "comma list: sign,linear,saturated[:radius]");
    compare->add_option("--out", out, "output directory");

    app.add_subcommand("list", "list bundled scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("run")) return cmd_run(scenario_arg, out, seed, dt, tmax);
        if (app.got_subcommand("check")) return cmd_check(scenario_arg, window, horizon);
        if (app.got_subcommand("compare")) return cmd_compare(scenario_arg, protocols_csv, out);
        if (app.got_subcommand("list")) return cmd_list();
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
