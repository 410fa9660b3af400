#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowmine/netlist.hpp"
#include "flowmine/trace.hpp"

namespace flowmine {

// Per-cycle input stimulus. rows[i][k] is the value of inputs[k] at cycle i.
struct Testbench {
    std::vector<std::string> inputs;
    std::vector<std::vector<std::uint64_t>> rows;

    std::size_t length() const { return rows.size(); }
};

Testbench read_testbench(std::istream& in);
Testbench read_testbench_file(const std::filesystem::path& path);
void write_testbench(const Testbench& tb, std::ostream& out);

// Signal-granular taint simulator over a validated design.
//
// Propagation: constants are untainted; every operator ORs its operand
// taints; a mux carries the taint of its condition OR of the selected arm.
// An input source is re-tainted every cycle. Any other source is tainted
// only in the reset state and afterwards only by propagation, so a
// constant assignment clears it.
class TaintSimulator {
public:
    explicit TaintSimulator(const Design& design);

    const std::vector<std::string>& signals() const { return signals_; }
    const std::vector<unsigned>& widths() const { return widths_; }
    std::size_t index_of(std::string_view signal) const;  // throws InputError

    // Reorders a testbench into design input order; checks coverage and widths.
    std::vector<std::vector<std::uint64_t>> bind(const Testbench& tb) const;

    // Regs at reset, inputs applied, wires evaluated. The source's tracking
    // bit is seeded and reaches combinational fan-out in the same state.
    State reset_state(std::span<const std::uint64_t> inputs, std::size_t source) const;

    // Clock edge: regs take their update from prev, then inputs are applied
    // and wires re-evaluated.
    State step(const State& prev, std::span<const std::uint64_t> inputs, std::size_t source) const;

    Trace run(const std::vector<std::vector<std::uint64_t>>& bound_inputs,
              std::size_t source) const;

private:
    struct Node {
        ExprKind kind;
        std::uint64_t mask;
        std::uint64_t value;   // Const
        std::uint32_t signal;  // Ref
        std::uint32_t a, b, c;
    };

    struct Value {
        std::uint64_t value;
        bool taint;
    };

    std::uint32_t compile(const Expr& e);
    Value eval(std::uint32_t node, const State& env) const;
    void settle_wires(State& state, std::size_t source, bool seed_source) const;

    std::vector<std::string> signals_;
    std::vector<unsigned> widths_;
    std::vector<SignalKind> kinds_;
    std::vector<std::uint64_t> reset_values_;
    std::vector<std::size_t> input_slots_;  // signal index per design input
    std::vector<std::size_t> regs_;
    std::vector<std::size_t> wire_order_;
    std::vector<std::uint32_t> driver_;  // root node per signal (wires, regs)
    std::vector<Node> nodes_;
};

Trace simulate_tainted(const Design& design, const Testbench& tb, std::string_view source);

// One trace per source, canonically ordered regardless of the order of
// `sources` or of worker scheduling. An empty source list means every
// signal. jobs > 1 simulates sources on that many threads.
TraceSet gen_all_traces(const Design& design, const Testbench& tb,
                        std::vector<std::string> sources = {}, unsigned jobs = 1);

}  // namespace flowmine
