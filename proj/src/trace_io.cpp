#include "consim/trace_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace consim {

namespace {

const char* kStatesScript = R"PY(#!/usr/bin/env python3
"""Plot per-agent state components over time from a trace CSV."""
import csv
import os
import sys


def load(path):
    series = {}
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            key = (int(row["agent"]), int(row["dim"]))
            ts, vs = series.setdefault(key, ([], []))
            ts.append(float(row["t"]))
            vs.append(float(row["value"]))
    return series


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "trace.csv")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series = load(path)
    dims = {k[1] for k in series}
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for (agent, dim), (ts, vs) in sorted(series.items()):
        label = f"agent {agent}" + (f"[{dim}]" if len(dims) > 1 else "")
        ax.plot(ts, vs, linewidth=1.0, label=label)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("state")
    if len(series) <= 12:
        ax.legend(fontsize=8)
    out = os.path.join(os.path.dirname(os.path.abspath(path)), "states.png")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
)PY";

const char* kLyapunovScript = R"PY(#!/usr/bin/env python3
"""Plot Lyapunov value vs time; overlays every CSV given on the command line.

Accepts both the long trace format (t,agent,dim,value,V,...) and plain t,V
files. With no arguments it looks for lyapunov_*.csv next to this script and
falls back to trace.csv.
"""
import csv
import glob
import os
import sys


def load_v(path):
    ts, vs = [], []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        fields = reader.fieldnames or []
        seen = set()
        for row in reader:
            t = float(row["t"])
            if "agent" in fields:
                if t in seen:
                    continue
                seen.add(t)
            ts.append(t)
            vs.append(float(row["V"]))
    return ts, vs


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    paths = sys.argv[1:]
    if not paths:
        paths = sorted(glob.glob(os.path.join(here, "lyapunov_*.csv")))
    if not paths:
        paths = [os.path.join(here, "trace.csv")]
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for path in paths:
        ts, vs = load_v(path)
        stem = os.path.splitext(os.path.basename(path))[0]
        ax.plot(ts, vs, linewidth=1.2, label=stem)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("V")
    ax.legend(fontsize=8)
    out = os.path.join(here, "lyapunov.png")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
)PY";

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory " + dir.string());
    }
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
    if (trace.empty()) throw std::domain_error("write_trace_csv: empty trace");
    out << "t,agent,dim,value,V,topology_id\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const SwarmState& state = trace.states[k];
        const std::string t = format_double(trace.times[k]);
        const std::string v = format_double(trace.lyapunov[k]);
        for (int i = 0; i < state.n(); ++i) {
            for (int d = 0; d < state.dim(); ++d) {
                out << t << ',' << i << ',' << d << ',' << format_double(state.values(i, d))
                    << ',' << v << ',' << trace.topology_ids[k] << '\n';
            }
        }
    }
}

void write_events_csv(const Trace& trace, std::ostream& out) {
    out << "t,kind,detail\n";
    for (const TraceEvent& e : trace.events) {
        out << format_double(e.t) << ',' << to_string(e.kind) << ',' << e.detail << '\n';
    }
}

void write_aux_csv(const AuxSeries& series, std::ostream& out) {
    for (std::size_t c = 0; c < series.columns.size(); ++c) {
        out << (c ? "," : "") << series.columns[c];
    }
    out << '\n';
    for (const auto& row : series.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_double(row[c]);
        }
        out << '\n';
    }
}

std::vector<std::filesystem::path> emit_plots(const Trace& trace,
                                              const std::filesystem::path& dir) {
    if (trace.empty()) throw std::domain_error("emit_plots: empty trace");
    ensure_dir(dir);
    std::vector<std::filesystem::path> written;

    {
        auto path = dir / "trace.csv";
        auto out = open_for_write(path);
        write_trace_csv(trace, out);
        written.push_back(path);
    }
    {
        auto path = dir / "events.csv";
        auto out = open_for_write(path);
        write_events_csv(trace, out);
        written.push_back(path);
    }
    for (const AuxSeries& series : trace.aux) {
        auto path = dir / (series.name + ".csv");
        auto out = open_for_write(path);
        write_aux_csv(series, out);
        written.push_back(path);
    }
    {
        auto path = dir / "plot_states.py";
        open_for_write(path) << kStatesScript;
        written.push_back(path);
    }
    {
        auto path = dir / "plot_lyapunov.py";
        open_for_write(path) << kLyapunovScript;
        written.push_back(path);
    }
    return written;
}

std::vector<std::filesystem::path> emit_compare_plots(
    const std::vector<std::pair<std::string, Trace>>& traces,
    const std::filesystem::path& dir) {
    if (traces.empty()) throw std::domain_error("emit_compare_plots: no traces");
    ensure_dir(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& [label, trace] : traces) {
        if (trace.empty()) throw std::domain_error("emit_compare_plots: empty trace " + label);
        auto path = dir / ("lyapunov_" + label + ".csv");
        auto out = open_for_write(path);
        out << "t,V\n";
        for (std::size_t k = 0; k < trace.size(); ++k) {
            out << format_double(trace.times[k]) << ',' << format_double(trace.lyapunov[k])
                << '\n';
        }
        written.push_back(path);
    }
    auto path = dir / "plot_lyapunov.py";
    open_for_write(path) << kLyapunovScript;
    written.push_back(path);
    return written;
}

}  // namespace consim
