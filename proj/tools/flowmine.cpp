#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowmine/pipeline.hpp"

namespace {

constexpr int kExitInput = 1;
constexpr int kExitInvariant = 2;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-flow specification miner for small RTL designs"};
    app.require_subcommand(1);

    std::string design, testbench, out, traces, flows, no_flow, conditions, spec;
    std::optional<std::string> groups;
    std::vector<std::string> sources;
    unsigned jobs = 1;

    auto* gen = app.add_subcommand("gen-traces", "simulate one tracked trace per source");
    gen->add_option("--design", design, "netlist file")->required()->check(CLI::ExistingFile);
    gen->add_option("--testbench", testbench, "testbench CSV")->required()->check(CLI::ExistingFile);
    gen->add_option("--out", out, "trace directory")->required();
    gen->add_option("--sources", sources, "comma separated sources (default: all signals)")->delimiter(',');
    gen->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* find = app.add_subcommand("find-flows", "compute time-of-flow cases and no-flow pairs");
    find->add_option("--traces", traces, "trace directory")->required();
    find->add_option("--out", out, "flow cases file")->required();
    find->add_option("--no-flow", no_flow, "no-flow file (default: noflow.txt next to --out)");
    find->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* mine = app.add_subcommand("mine", "mine flow conditions per case");
    mine->add_option("--traces", traces, "trace directory")->required();
    mine->add_option("--flows", flows, "flow cases file")->required()->check(CLI::ExistingFile);
    mine->add_option("--out", out, "conditions file")->required();
    mine->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* post = app.add_subcommand("post", "drop trace-set invariants, merge, emit the specification");
    post->add_option("--conditions", conditions, "conditions file")->required()->check(CLI::ExistingFile);
    post->add_option("--traces", traces, "trace directory")->required();
    post->add_option("--out", out, "specification file")->required();

    auto* report = app.add_subcommand("report", "group-to-group flow heatmap");
    report->add_option("--spec", spec, "specification file")->required()->check(CLI::ExistingFile);
    report->add_option("--groups", groups, "signal,group CSV");
    report->add_option("--out", out, "heatmap CSV")->required();

    auto* run = app.add_subcommand("run", "all phases end to end");
    run->add_option("--design", design, "netlist file")->required()->check(CLI::ExistingFile);
    run->add_option("--testbench", testbench, "testbench CSV")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "output directory")->required();
    run->add_option("--groups", groups, "signal,group CSV");
    run->add_option("--sources", sources, "comma separated sources (default: all signals)")->delimiter(',');
    run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    auto opt_path = [](const std::optional<std::string>& s) -> std::optional<flowmine::fs::path> {
        if (s) {
            return flowmine::fs::path(*s);
        }
        return std::nullopt;
    };

    try {
        if (gen->parsed()) {
            flowmine::gen_traces_phase(design, testbench, out, sources, jobs);
        } else if (find->parsed()) {
            flowmine::fs::path nf = no_flow.empty() ? flowmine::default_no_flow_path(out) : flowmine::fs::path(no_flow);
            flowmine::find_flows_phase(traces, out, nf, jobs);
        } else if (mine->parsed()) {
            flowmine::mine_phase(traces, flows, out, jobs);
        } else if (post->parsed()) {
            flowmine::post_phase(conditions, traces, out);
        } else if (report->parsed()) {
            flowmine::report_phase(spec, opt_path(groups), out);
        } else if (run->parsed()) {
            flowmine::run_pipeline({design, testbench, out, opt_path(groups), sources, jobs});
        }
    } catch (const flowmine::InvariantViolation& e) {
        std::cerr << "flowmine: internal error: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const flowmine::InputError& e) {
        std::cerr << "flowmine: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
