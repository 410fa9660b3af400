#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "flowmine/trace.hpp"

namespace flowmine {

struct FlowPair {
    std::string src;
    std::string sink;

    auto operator<=>(const FlowPair&) const = default;
};

// Cycles at which sink's tracking bit rises in the source's trace. Time 0
// is included when the sink is already tracked in the reset state.
struct TimeOfFlow {
    std::string src;
    std::string sink;
    std::vector<std::size_t> times;  // ascending, distinct

    bool operator==(const TimeOfFlow&) const = default;
};

// All pairs whose flows happen at exactly `times`.
struct FlowCase {
    std::size_t id = 0;
    std::vector<std::size_t> times;
    std::vector<FlowPair> pairs;  // sorted

    bool time_zero_only() const { return times.size() == 1 && times.front() == 0; }
    bool operator==(const FlowCase&) const = default;
};

// One tuple per non-source sink with at least one rising edge, in the
// trace's signal order.
std::vector<TimeOfFlow> find_time_of_flow(const Trace& trace);

// Partitions tuples by exact time-set equality. Case ids follow the
// lexicographic order of the time-sets, starting at 0.
std::vector<FlowCase> group_flows(const std::vector<TimeOfFlow>& tuples);

// Ordered pairs (src, sink), src in traced_sources, sink in signals,
// src != sink, with no flow tuple. Pairs whose source was not traced are
// neither flows nor no-flows. Output follows signal order.
std::vector<FlowPair> no_flow_set(const std::vector<std::string>& signals,
                                  const std::vector<std::string>& traced_sources,
                                  const std::vector<TimeOfFlow>& tuples);

struct FlowAnalysis {
    std::vector<TimeOfFlow> tuples;
    std::vector<FlowCase> cases;
    std::vector<FlowPair> no_flow;
    std::vector<std::string> untraced;  // signals never traced as a source
};

// Runs all of Phase 2 over a canonical trace set and checks that cases and
// no-flow pairs partition the traced pairs (InvariantViolation otherwise).
FlowAnalysis analyze_flows(const TraceSet& traces, unsigned jobs = 1);

void check_flow_partition(const TraceSet& traces, const FlowAnalysis& analysis);

// "case <id>: times={t0,t1} pairs={a->b, a->c}"
std::string format_flow_case(const FlowCase& c);
FlowCase parse_flow_case(const std::string& line);  // throws InputError

void write_flows(const std::vector<FlowCase>& cases, std::ostream& out);
std::vector<FlowCase> read_flows(std::istream& in);

// "src =/=> sink" per line; lines starting with '#' are comments.
void write_no_flow(const std::vector<FlowPair>& pairs, const std::vector<std::string>& untraced,
                   std::ostream& out);
std::vector<FlowPair> read_no_flow(std::istream& in);

}  // namespace flowmine
