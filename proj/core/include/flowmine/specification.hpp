#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "flowmine/flows.hpp"
#include "flowmine/miner.hpp"
#include "flowmine/predicate.hpp"

namespace flowmine {

enum class PropertyKind { ConditionalFlow, NoFlow };

struct Property {
    PropertyKind kind = PropertyKind::ConditionalFlow;
    std::size_t number = 0;              // sequential output case number
    std::vector<std::string> sources;    // sorted
    std::vector<std::string> sinks;      // sorted
    std::vector<Condition> conditions;   // canonical order; empty = unconditioned
    std::vector<std::size_t> case_ids;   // flow cases merged into this property
    std::vector<std::size_t> times;      // provenance; not emitted

    bool operator==(const Property&) const = default;
};

// Drops conditions whose predicate is structurally equal to a trace-set
// invariant, then applies normalize_conditions.
ConditionSet eliminate_trace_invariants(const ConditionSet& cs, const std::vector<Predicate>& invariants,
                                        const SignalTable& table);

// Minimal redundancy pruning, per signal and row:
//   r in {0}  with r == 0            -> keep r == 0
//   r in {1}  with r != 0, 1-bit r   -> keep r != 0
//   r in S, 0 not in S, with r != 0  -> keep r in S (other widths)
// plus a == b / a != b when both sides are pinned to a constant on that
// row, and r == prev(r) when r is pinned on both rows.
std::vector<Condition> normalize_conditions(std::vector<Condition> conditions, const SignalTable& table);

// Merges cases with identical (time-set, condition-set) into one
// multi-source, multi-sink property. Output is ordered by smallest case id
// and numbered from 0.
std::vector<Property> merge_properties(const std::vector<MinedCase>& cases);

// Textual specification: one block per flow property, then the no-flow
// pairs. Byte-stable for equal inputs.
void emit_specification(const std::vector<Property>& properties, const std::vector<FlowPair>& no_flow,
                        std::ostream& out);
std::string format_condition_lines(const std::vector<Condition>& conditions);

struct Specification {
    std::vector<Property> properties;  // times left empty
    std::vector<FlowPair> no_flow;

    bool operator==(const Specification&) const = default;
};

Specification read_specification(std::istream& in);  // throws ParseError

// Heatmap of flow properties between signal groups.
struct Heatmap {
    std::vector<std::string> groups;
    std::vector<std::vector<std::size_t>> counts;  // [source group][sink group]

    bool operator==(const Heatmap&) const = default;
};

inline constexpr const char* kDefaultGroup = "other";

// "signal,group" rows, optional header; returns the map and the group
// names in first-appearance order.
struct GroupAssignment {
    std::map<std::string, std::string> group_of;
    std::vector<std::string> order;
};
GroupAssignment read_groups(std::istream& in);

// Cell (g1, g2) counts the properties holding at least one source in g1 and
// one sink in g2. Unmapped signals fall into "other", which is appended
// as the last group when used.
Heatmap group_heatmap(const std::vector<Property>& properties, const GroupAssignment& groups);

void write_heatmap_csv(const Heatmap& heatmap, std::ostream& out);

}  // namespace flowmine
