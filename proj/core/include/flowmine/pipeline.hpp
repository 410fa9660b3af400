#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flowmine/flows.hpp"
#include "flowmine/miner.hpp"
#include "flowmine/netlist.hpp"
#include "flowmine/simulator.hpp"
#include "flowmine/specification.hpp"

namespace flowmine {

namespace fs = std::filesystem;

// Postprocessing over in-memory phase outputs: trace-set invariant
// elimination, normalization, merge. Throws InputError when the mined
// cases do not match the flows of `traces`, InvariantViolation when an
// emitted predicate is still a trace-set invariant.
Specification postprocess(const std::vector<MinedCase>& mined, const TraceSet& traces, unsigned jobs = 1);

// All four phases in memory.
Specification mine_specification(const Design& design, const Testbench& tb,
                                 const std::vector<std::string>& sources = {}, unsigned jobs = 1);

std::string specification_text(const Specification& spec);

// File-level phases. Errors keep their type and are prefixed with the
// phase name ("gen-traces: ...").
void gen_traces_phase(const fs::path& design, const fs::path& testbench, const fs::path& out_dir,
                      const std::vector<std::string>& sources, unsigned jobs);
void find_flows_phase(const fs::path& traces_dir, const fs::path& out, const fs::path& no_flow_out,
                      unsigned jobs);
void mine_phase(const fs::path& traces_dir, const fs::path& flows, const fs::path& out, unsigned jobs);
void post_phase(const fs::path& conditions, const fs::path& traces_dir, const fs::path& out);
void report_phase(const fs::path& spec, const std::optional<fs::path>& groups, const fs::path& out);

struct RunOptions {
    fs::path design;
    fs::path testbench;
    fs::path out_dir;
    std::optional<fs::path> groups;
    std::vector<std::string> sources;
    unsigned jobs = 1;
};

// Writes traces/, flows.txt, noflow.txt, conditions.txt, spec.txt and
// heatmap.csv under out_dir.
void run_pipeline(const RunOptions& options);

// Sibling no-flow file for a flows file: "<dir>/noflow.txt".
fs::path default_no_flow_path(const fs::path& flows);

}  // namespace flowmine
