#include "flowmine/simulator.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "parallel.hpp"
#include "text_util.hpp"

namespace flowmine {

Testbench read_testbench(std::istream& in) {
    Testbench tb;
    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line)) {
        ++line_no;
        if (!detail::trim(line).empty()) {
            break;
        }
    }
    auto header = detail::split(line, ',');
    if (line_no == 0 || detail::trim(header[0]) != "cycle") {
        throw ParseError("testbench header must start with 'cycle'", std::max<std::size_t>(line_no, 1));
    }
    for (std::size_t k = 1; k < header.size(); ++k) {
        auto name = detail::trim(header[k]);
        if (name.empty()) {
            throw ParseError("empty column name in testbench header", line_no, k + 1);
        }
        if (std::find(tb.inputs.begin(), tb.inputs.end(), name) != tb.inputs.end()) {
            throw ParseError("duplicate testbench column '" + std::string(name) + "'", line_no, k + 1);
        }
        tb.inputs.emplace_back(name);
    }
    while (detail::read_line(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        auto cells = detail::split(line, ',');
        if (cells.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " columns, found " +
                                 std::to_string(cells.size()),
                             line_no);
        }
        auto cycle = detail::parse_uint(cells[0]);
        if (!cycle || *cycle != tb.rows.size()) {
            throw ParseError("cycle column must count up from 0", line_no, 1);
        }
        std::vector<std::uint64_t> row;
        for (std::size_t k = 1; k < cells.size(); ++k) {
            auto v = detail::parse_uint(cells[k]);
            if (!v) {
                throw ParseError("malformed value '" + std::string(cells[k]) + "'", line_no, k + 1);
            }
            row.push_back(*v);
        }
        tb.rows.push_back(std::move(row));
    }
    return tb;
}

Testbench read_testbench_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open testbench '" + path.string() + "'");
    }
    return read_testbench(in);
}

void write_testbench(const Testbench& tb, std::ostream& out) {
    out << "cycle";
    for (const auto& name : tb.inputs) {
        out << ',' << name;
    }
    out << '\n';
    for (std::size_t i = 0; i < tb.rows.size(); ++i) {
        out << i;
        for (auto v : tb.rows[i]) {
            out << ',' << v;
        }
        out << '\n';
    }
}

TaintSimulator::TaintSimulator(const Design& design) {
    validate(design);
    std::unordered_map<std::string_view, std::uint32_t> index;
    for (const auto& d : design.decls) {
        index.emplace(d.name, static_cast<std::uint32_t>(signals_.size()));
        signals_.push_back(d.name);
        widths_.push_back(d.width);
        kinds_.push_back(d.kind);
        reset_values_.push_back(d.kind == SignalKind::Reg ? d.reset_value : 0);
    }
    for (const auto& name : design.inputs) {
        input_slots_.push_back(index.at(name));
    }
    for (std::size_t i = 0; i < signals_.size(); ++i) {
        if (kinds_[i] == SignalKind::Reg) {
            regs_.push_back(i);
        }
    }
    for (const auto& name : evaluation_order(design)) {
        auto i = index.at(name);
        if (kinds_[i] == SignalKind::Wire) {
            wire_order_.push_back(i);
        }
    }

    driver_.assign(signals_.size(), UINT32_MAX);
    auto compile_all = [&](const std::map<std::string, Expr>& table) {
        for (const auto& [target, expr] : table) {
            driver_[index.at(target)] = compile(expr);
        }
    };
    compile_all(design.assigns);
    compile_all(design.updates);
}

std::uint32_t TaintSimulator::compile(const Expr& e) {
    Node n{e.kind, width_mask(e.width), e.value, 0, 0, 0, 0};
    if (e.kind == ExprKind::Ref) {
        n.signal = static_cast<std::uint32_t>(index_of(e.name));
    }
    std::uint32_t kids[3] = {0, 0, 0};
    for (std::size_t k = 0; k < e.args.size(); ++k) {
        kids[k] = compile(e.args[k]);
    }
    n.a = kids[0];
    n.b = kids[1];
    n.c = kids[2];
    nodes_.push_back(n);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::size_t TaintSimulator::index_of(std::string_view signal) const {
    auto it = std::find(signals_.begin(), signals_.end(), signal);
    if (it == signals_.end()) {
        throw InputError("unknown signal '" + std::string(signal) + "'");
    }
    return static_cast<std::size_t>(it - signals_.begin());
}

TaintSimulator::Value TaintSimulator::eval(std::uint32_t id, const State& env) const {
    const Node& n = nodes_[id];
    switch (n.kind) {
        case ExprKind::Const:
            return {n.value, false};
        case ExprKind::Ref:
            return {env.values[n.signal], env.taints[n.signal] != 0};
        case ExprKind::Not: {
            auto a = eval(n.a, env);
            return {~a.value & n.mask, a.taint};
        }
        case ExprKind::Mux: {
            auto c = eval(n.a, env);
            auto arm = eval(c.value != 0 ? n.b : n.c, env);
            return {arm.value, c.taint || arm.taint};
        }
        default:
            break;
    }
    auto a = eval(n.a, env);
    auto b = eval(n.b, env);
    std::uint64_t v = 0;
    switch (n.kind) {
        case ExprKind::And: v = a.value & b.value; break;
        case ExprKind::Or: v = a.value | b.value; break;
        case ExprKind::Xor: v = a.value ^ b.value; break;
        case ExprKind::Add: v = (a.value + b.value) & n.mask; break;
        case ExprKind::Eq: v = a.value == b.value; break;
        case ExprKind::Ne: v = a.value != b.value; break;
        case ExprKind::Lt: v = a.value < b.value; break;
        default: break;
    }
    return {v, a.taint || b.taint};
}

void TaintSimulator::settle_wires(State& state, std::size_t source, bool seed_source) const {
    for (auto w : wire_order_) {
        auto r = eval(driver_[w], state);
        state.values[w] = r.value;
        state.taints[w] = r.taint || (seed_source && w == source);
    }
}

std::vector<std::vector<std::uint64_t>> TaintSimulator::bind(const Testbench& tb) const {
    std::vector<std::size_t> column(input_slots_.size());
    for (std::size_t k = 0; k < input_slots_.size(); ++k) {
        const auto& name = signals_[input_slots_[k]];
        auto it = std::find(tb.inputs.begin(), tb.inputs.end(), name);
        if (it == tb.inputs.end()) {
            throw InputError("testbench does not drive input '" + name + "'");
        }
        column[k] = static_cast<std::size_t>(it - tb.inputs.begin());
    }
    for (const auto& name : tb.inputs) {
        auto it = std::find(signals_.begin(), signals_.end(), name);
        if (it == signals_.end() || kinds_[static_cast<std::size_t>(it - signals_.begin())] != SignalKind::Input) {
            throw InputError("testbench column '" + name + "' is not a design input");
        }
    }
    if (tb.rows.empty()) {
        throw InputError("testbench has no cycles");
    }
    std::vector<std::vector<std::uint64_t>> bound;
    bound.reserve(tb.rows.size());
    for (std::size_t i = 0; i < tb.rows.size(); ++i) {
        std::vector<std::uint64_t> row(input_slots_.size());
        for (std::size_t k = 0; k < input_slots_.size(); ++k) {
            auto v = tb.rows[i][column[k]];
            auto slot = input_slots_[k];
            if (v > width_mask(widths_[slot])) {
                throw InputError("testbench cycle " + std::to_string(i) + ": value " +
                                 std::to_string(v) + " does not fit input '" + signals_[slot] +
                                 "' (" + std::to_string(widths_[slot]) + " bits)");
            }
            row[k] = v;
        }
        bound.push_back(std::move(row));
    }
    return bound;
}

State TaintSimulator::reset_state(std::span<const std::uint64_t> inputs, std::size_t source) const {
    State s;
    s.values.assign(signals_.size(), 0);
    s.taints.assign(signals_.size(), 0);
    for (auto r : regs_) {
        s.values[r] = reset_values_[r];
    }
    for (std::size_t k = 0; k < input_slots_.size(); ++k) {
        s.values[input_slots_[k]] = inputs[k];
    }
    s.taints[source] = 1;
    settle_wires(s, source, true);
    return s;
}

State TaintSimulator::step(const State& prev, std::span<const std::uint64_t> inputs,
                           std::size_t source) const {
    State s;
    s.values.assign(signals_.size(), 0);
    s.taints.assign(signals_.size(), 0);
    for (auto r : regs_) {
        auto v = eval(driver_[r], prev);
        s.values[r] = v.value;
        s.taints[r] = v.taint;
    }
    for (std::size_t k = 0; k < input_slots_.size(); ++k) {
        auto slot = input_slots_[k];
        s.values[slot] = inputs[k];
        s.taints[slot] = slot == source;
    }
    settle_wires(s, source, false);
    return s;
}

Trace TaintSimulator::run(const std::vector<std::vector<std::uint64_t>>& bound_inputs,
                          std::size_t source) const {
    Trace t;
    t.source = signals_.at(source);
    t.signals = signals_;
    t.states.reserve(bound_inputs.size());
    for (std::size_t i = 0; i < bound_inputs.size(); ++i) {
        t.states.push_back(i == 0 ? reset_state(bound_inputs[0], source)
                                  : step(t.states.back(), bound_inputs[i], source));
    }
    return t;
}

Trace simulate_tainted(const Design& design, const Testbench& tb, std::string_view source) {
    TaintSimulator sim(design);
    auto src = sim.index_of(source);
    return sim.run(sim.bind(tb), src);
}

TraceSet gen_all_traces(const Design& design, const Testbench& tb, std::vector<std::string> sources,
                        unsigned jobs) {
    TaintSimulator sim(design);
    auto bound = sim.bind(tb);
    if (sources.empty()) {
        sources = sim.signals();
    }
    std::vector<std::size_t> ids;
    for (const auto& s : sources) {
        ids.push_back(sim.index_of(s));
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw InputError("duplicate source in source list");
    }

    TraceSet set;
    set.signals = sim.signals();
    set.widths = sim.widths();
    set.traces.resize(ids.size());

    detail::parallel_for(ids.size(), jobs, [&](std::size_t k) { set.traces[k] = sim.run(bound, ids[k]); });
    return set;
}

}  // namespace flowmine
