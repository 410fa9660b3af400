#include "oracle.hpp"

namespace oracle {

namespace {

using flowmine::Expr;
using flowmine::ExprKind;
using flowmine::SignalDecl;
using flowmine::SignalKind;

struct Gen {
    std::mt19937_64& rng;
    std::vector<SignalDecl> visible;

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
    bool coin(int percent) { return pick(100) < static_cast<std::size_t>(percent); }

    Expr leaf(unsigned width) {
        std::vector<const SignalDecl*> fits;
        for (const auto& d : visible) {
            if (d.width == width) {
                fits.push_back(&d);
            }
        }
        if (fits.empty() || coin(15)) {
            return Expr::constant(pick(std::size_t{1} << width), width);
        }
        const auto* d = fits[pick(fits.size())];
        return Expr::ref(d->name, width);
    }

    Expr expr(unsigned width, int depth) {
        if (depth == 0 || coin(30)) {
            return leaf(width);
        }
        switch (pick(width == 1 ? 5 : 3)) {
            case 0: return Expr::bit_not(expr(width, depth - 1));
            case 1: {
                static constexpr ExprKind ops[] = {ExprKind::And, ExprKind::Or, ExprKind::Xor, ExprKind::Add};
                return Expr::binary(ops[pick(4)], expr(width, depth - 1), expr(width, depth - 1));
            }
            case 2: return Expr::mux(expr(1, depth - 1), expr(width, depth - 1), expr(width, depth - 1));
            default: {
                // a signal on the left gives the literal on the right its width
                static constexpr ExprKind cmps[] = {ExprKind::Eq, ExprKind::Ne, ExprKind::Lt};
                const auto& d = visible[pick(visible.size())];
                return Expr::binary(cmps[pick(3)], Expr::ref(d.name, d.width), leaf(d.width));
            }
        }
    }
};

}  // namespace

RandomDesign random_design(std::mt19937_64& rng) {
    Gen g{rng, {}};
    std::size_t n_inputs = 1 + g.pick(3);
    std::size_t n_regs = 1 + g.pick(3);
    std::size_t n_wires = g.pick(3);

    RandomDesign out;
    Design& d = out.design;
    d.name = "rand";
    for (std::size_t i = 0; i < n_inputs; ++i) {
        d.decls.push_back({"i" + std::to_string(i), 1 + static_cast<unsigned>(g.pick(2)), SignalKind::Input, 0});
        d.inputs.push_back(d.decls.back().name);
    }
    for (std::size_t i = 0; i < n_regs; ++i) {
        unsigned w = 1 + static_cast<unsigned>(g.pick(2));
        d.decls.push_back({"r" + std::to_string(i), w, SignalKind::Reg, g.pick(std::size_t{1} << w)});
    }
    // Wires see inputs, regs and earlier wires only, so the graph is acyclic.
    g.visible = d.decls;
    for (std::size_t i = 0; i < n_wires; ++i) {
        SignalDecl w{"w" + std::to_string(i), 1 + static_cast<unsigned>(g.pick(2)), SignalKind::Wire, 0};
        d.assigns.emplace(w.name, g.expr(w.width, 2));
        d.decls.push_back(w);
        g.visible.push_back(w);
    }
    g.visible = d.decls;
    for (const auto& decl : d.decls) {
        if (decl.kind == SignalKind::Reg) {
            d.updates.emplace(decl.name, g.expr(decl.width, 3));
        }
    }

    Testbench& tb = out.testbench;
    tb.inputs = d.inputs;
    std::size_t cycles = 1 + g.pick(16);
    for (std::size_t c = 0; c < cycles; ++c) {
        std::vector<std::uint64_t> row;
        for (const auto& name : d.inputs) {
            row.push_back(g.pick(std::size_t{1} << d.find(name)->width));
        }
        tb.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace oracle
