#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flowmine/error.hpp"

namespace flowmine {

// One clock cycle: value and tracking bit per signal, in the trace's
// signal order.
struct State {
    std::vector<std::uint64_t> values;
    std::vector<std::uint8_t> taints;

    bool operator==(const State&) const = default;
};

// Execution of the design with exactly one signal's tracking bit seeded.
struct Trace {
    std::string source;
    std::vector<std::string> signals;
    std::vector<State> states;

    std::size_t index_of(std::string_view signal) const;  // throws InputError
    std::size_t length() const { return states.size(); }

    bool operator==(const Trace&) const = default;
};

// All per-source traces of one design under one testbench, in canonical
// order (source position in the shared signal order). widths is parallel
// to the signal order; a zero entry means the width is unknown, which is
// the case for traces ingested without a manifest.
struct TraceSet {
    std::vector<std::string> signals;
    std::vector<unsigned> widths;
    std::vector<Trace> traces;

    const Trace* find(std::string_view source) const;
    std::vector<std::string> sources() const;
};

// Checks that all traces share the signal order and length, sources are
// distinct members of the signal order, and sorts them canonically.
void canonicalize(TraceSet& set);

void write_trace(const Trace& trace, std::ostream& out);
Trace read_trace(std::istream& in);
void write_trace_file(const Trace& trace, const std::filesystem::path& path);
Trace read_trace_file(const std::filesystem::path& path);

// Directory layout: one "<source>.trace.csv" per trace plus an optional
// "signals.csv" manifest with "signal,width" rows.
inline constexpr std::string_view kTraceSuffix = ".trace.csv";
inline constexpr std::string_view kManifestName = "signals.csv";

void write_trace_set(const TraceSet& set, const std::filesystem::path& dir);
TraceSet read_trace_set(const std::filesystem::path& dir);

// Two consecutive value rows around a flow time; tracking columns pruned.
struct Slice {
    std::string source;
    std::size_t time = 0;  // the flow row is states[time]
    std::vector<std::uint64_t> prior;
    std::vector<std::uint64_t> flow;

    bool operator==(const Slice&) const = default;
};

// One slice per time, ascending. Time 0 has no prior row and is rejected,
// as is any time past the end of the trace.
std::vector<Slice> slice(const Trace& trace, const std::set<std::size_t>& times);

}  // namespace flowmine
