#pragma once

#include "consim/simulator.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace consim {

// Shortest round-trip decimal form; keeps repeated runs byte-identical.
std::string format_double(double v);

// Long format, one row per (instant, agent, dimension):
// t,agent,dim,value,V,topology_id
void write_trace_csv(const Trace& trace, std::ostream& out);
// t,kind,detail
void write_events_csv(const Trace& trace, std::ostream& out);
void write_aux_csv(const AuxSeries& series, std::ostream& out);

// Writes trace.csv, events.csv, one CSV per aux series, and the matplotlib
// scripts plot_states.py and plot_lyapunov.py into dir. Returns the paths.
std::vector<std::filesystem::path> emit_plots(const Trace& trace,
                                              const std::filesystem::path& dir);

// Comparison output: one lyapunov_<label>.csv (t,V) per trace plus a shared
// overlay script.
std::vector<std::filesystem::path> emit_compare_plots(
    const std::vector<std::pair<std::string, Trace>>& traces,
    const std::filesystem::path& dir);

}  // namespace consim
