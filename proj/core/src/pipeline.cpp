#include "flowmine/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace flowmine {

namespace {

template <class Fn>
void tagged(const char* phase, Fn&& fn) {
    try {
        fn();
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(std::string(phase) + ": " + e.what());
    } catch (const InputError& e) {
        throw InputError(std::string(phase) + ": " + e.what());
    } catch (const fs::filesystem_error& e) {
        throw InputError(std::string(phase) + ": " + e.what());
    }
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "'");
    }
    return in;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path.string() + "'");
    }
    writer(out);
    out.flush();
    if (!out) {
        throw InputError("write failed for '" + path.string() + "'");
    }
}

void check_cases_match(const std::vector<MinedCase>& mined, const std::vector<FlowCase>& cases) {
    if (mined.size() != cases.size()) {
        throw InputError("conditions list " + std::to_string(mined.size()) + " flow cases, traces give " +
                         std::to_string(cases.size()));
    }
    for (std::size_t k = 0; k < cases.size(); ++k) {
        if (!(mined[k].first == cases[k])) {
            throw InputError("flow case " + std::to_string(mined[k].first.id) + " does not match the traces");
        }
    }
}

void remove_stale_traces(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        return;
    }
    std::vector<fs::path> stale;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().filename().string().ends_with(kTraceSuffix)) {
            stale.push_back(entry.path());
        }
    }
    for (const auto& p : stale) {
        fs::remove(p);
    }
}

}  // namespace

Specification postprocess(const std::vector<MinedCase>& mined, const TraceSet& traces, unsigned jobs) {
    auto analysis = analyze_flows(traces, jobs);
    check_cases_match(mined, analysis.cases);

    SignalTable table(traces.signals, traces.widths);
    auto invariants = mine_trace_invariants(traces);
    std::vector<MinedCase> kept;
    kept.reserve(mined.size());
    for (const auto& [fc, cs] : mined) {
        kept.emplace_back(fc, eliminate_trace_invariants(cs, invariants, table));
    }

    Specification spec;
    spec.properties = merge_properties(kept);
    spec.no_flow = std::move(analysis.no_flow);

    std::set<Predicate> inv(invariants.begin(), invariants.end());
    for (const auto& p : spec.properties) {
        for (const auto& c : p.conditions) {
            if (inv.contains(c.pred)) {
                throw InvariantViolation("property " + std::to_string(p.number) + " keeps trace-set invariant '" +
                                         format_predicate(c.pred) + "'");
            }
        }
    }
    return spec;
}

Specification mine_specification(const Design& design, const Testbench& tb,
                                 const std::vector<std::string>& sources, unsigned jobs) {
    auto traces = gen_all_traces(design, tb, sources, jobs);
    auto analysis = analyze_flows(traces, jobs);
    auto sets = mine_all(analysis.cases, traces, jobs);
    std::vector<MinedCase> mined;
    for (std::size_t k = 0; k < sets.size(); ++k) {
        mined.emplace_back(analysis.cases[k], std::move(sets[k]));
    }
    return postprocess(mined, traces, jobs);
}

std::string specification_text(const Specification& spec) {
    std::ostringstream out;
    emit_specification(spec.properties, spec.no_flow, out);
    return out.str();
}

fs::path default_no_flow_path(const fs::path& flows) { return flows.parent_path() / "noflow.txt"; }

void gen_traces_phase(const fs::path& design, const fs::path& testbench, const fs::path& out_dir,
                      const std::vector<std::string>& sources, unsigned jobs) {
    tagged("gen-traces", [&] {
        auto d = load_design_file(design.string());
        auto tb = read_testbench_file(testbench);
        auto traces = gen_all_traces(d, tb, sources, jobs);
        remove_stale_traces(out_dir);
        write_trace_set(traces, out_dir);
    });
}

void find_flows_phase(const fs::path& traces_dir, const fs::path& out, const fs::path& no_flow_out,
                      unsigned jobs) {
    tagged("find-flows", [&] {
        auto traces = read_trace_set(traces_dir);
        auto analysis = analyze_flows(traces, jobs);
        write_file(out, [&](std::ostream& o) { write_flows(analysis.cases, o); });
        write_file(no_flow_out, [&](std::ostream& o) { write_no_flow(analysis.no_flow, analysis.untraced, o); });
    });
}

void mine_phase(const fs::path& traces_dir, const fs::path& flows, const fs::path& out, unsigned jobs) {
    tagged("mine", [&] {
        auto traces = read_trace_set(traces_dir);
        auto in = open_in(flows);
        auto cases = read_flows(in);
        auto sets = mine_all(cases, traces, jobs);
        std::vector<MinedCase> mined;
        for (std::size_t k = 0; k < sets.size(); ++k) {
            mined.emplace_back(cases[k], std::move(sets[k]));
        }
        write_file(out, [&](std::ostream& o) { write_conditions(mined, o); });
    });
}

void post_phase(const fs::path& conditions, const fs::path& traces_dir, const fs::path& out) {
    tagged("post", [&] {
        auto in = open_in(conditions);
        auto mined = read_conditions(in);
        auto traces = read_trace_set(traces_dir);
        auto spec = postprocess(mined, traces);
        write_file(out, [&](std::ostream& o) { emit_specification(spec.properties, spec.no_flow, o); });
    });
}

void report_phase(const fs::path& spec, const std::optional<fs::path>& groups, const fs::path& out) {
    tagged("report", [&] {
        auto in = open_in(spec);
        auto s = read_specification(in);
        GroupAssignment g;
        if (groups) {
            auto gin = open_in(*groups);
            g = read_groups(gin);
        }
        auto h = group_heatmap(s.properties, g);
        write_file(out, [&](std::ostream& o) { write_heatmap_csv(h, o); });
    });
}

void run_pipeline(const RunOptions& options) {
    const auto& dir = options.out_dir;
    auto traces = dir / "traces";
    auto flows = dir / "flows.txt";
    auto conditions = dir / "conditions.txt";
    auto spec = dir / "spec.txt";
    gen_traces_phase(options.design, options.testbench, traces, options.sources, options.jobs);
    find_flows_phase(traces, flows, default_no_flow_path(flows), options.jobs);
    mine_phase(traces, flows, conditions, options.jobs);
    post_phase(conditions, traces, spec);
    report_phase(spec, options.groups, dir / "heatmap.csv");
}

}  // namespace flowmine
