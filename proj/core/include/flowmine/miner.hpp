#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "flowmine/flows.hpp"
#include "flowmine/predicate.hpp"
#include "flowmine/trace.hpp"

namespace flowmine {

struct ConditionSet {
    std::size_t case_id = 0;
    std::vector<Condition> conditions;  // canonical order
    bool unconditioned = false;         // no slices to mine (flows only at time 0)

    bool operator==(const ConditionSet&) const = default;
};

// Truth of one annotated predicate on one slice.
bool check_predicate(const Condition& c, const Slice& s, const SignalTable& table);

// Template instances for the slices, in canonical order: per row position,
// a membership seeded from the observed values (dropped past three
// values), r == 0 and r != 0, and a == b / a != b for every pair of
// comparable width; plus r == prev(r) across both rows.
std::vector<Condition> candidate_predicates(const SignalTable& table, const std::vector<Slice>& slices);

// Candidates that hold on every slice.
ConditionSet mine_conditions(const FlowCase& flow_case, const std::vector<Slice>& slices,
                             const SignalTable& table);

// Slices at the case's nonzero times, taken from the trace of every source
// in the case.
std::vector<Slice> case_slices(const FlowCase& flow_case, const TraceSet& traces);

// Predicates true at every cycle of every trace (r == prev(r) over every
// consecutive pair), in canonical order.
std::vector<Predicate> mine_trace_invariants(const TraceSet& traces);

std::vector<ConditionSet> mine_all(const std::vector<FlowCase>& cases, const TraceSet& traces,
                                   unsigned jobs = 1);

// Conditions file: every flow case line followed by its predicates as
// "case <id>: <prior|flow|both> <predicate>".
using MinedCase = std::pair<FlowCase, ConditionSet>;

void write_conditions(const std::vector<MinedCase>& mined, std::ostream& out);
std::vector<MinedCase> read_conditions(std::istream& in);

}  // namespace flowmine
