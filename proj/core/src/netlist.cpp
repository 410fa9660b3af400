#include "flowmine/netlist.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace flowmine {

std::string_view to_string(SignalKind kind) {
    switch (kind) {
        case SignalKind::Input: return "input";
        case SignalKind::Wire: return "wire";
        case SignalKind::Reg: return "reg";
    }
    return "?";
}

std::string_view to_string(ExprKind kind) {
    switch (kind) {
        case ExprKind::Const: return "const";
        case ExprKind::Ref: return "ref";
        case ExprKind::Not: return "~";
        case ExprKind::And: return "&";
        case ExprKind::Or: return "|";
        case ExprKind::Xor: return "^";
        case ExprKind::Add: return "+";
        case ExprKind::Eq: return "==";
        case ExprKind::Ne: return "!=";
        case ExprKind::Lt: return "<";
        case ExprKind::Mux: return "mux";
    }
    return "?";
}

bool is_arithmetic(ExprKind kind) {
    return kind == ExprKind::And || kind == ExprKind::Or || kind == ExprKind::Xor ||
           kind == ExprKind::Add;
}

bool is_comparison(ExprKind kind) {
    return kind == ExprKind::Eq || kind == ExprKind::Ne || kind == ExprKind::Lt;
}

Expr Expr::constant(std::uint64_t value, unsigned width) {
    Expr e;
    e.kind = ExprKind::Const;
    e.width = width;
    e.value = value;
    return e;
}

Expr Expr::ref(std::string name, unsigned width) {
    Expr e;
    e.kind = ExprKind::Ref;
    e.width = width;
    e.name = std::move(name);
    return e;
}

Expr Expr::bit_not(Expr operand) {
    Expr e;
    e.kind = ExprKind::Not;
    e.width = operand.width;
    e.args.push_back(std::move(operand));
    return e;
}

Expr Expr::binary(ExprKind kind, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = kind;
    e.width = is_comparison(kind) ? 1 : lhs.width;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

Expr Expr::mux(Expr cond, Expr then_expr, Expr else_expr) {
    Expr e;
    e.kind = ExprKind::Mux;
    e.width = then_expr.width;
    e.args.push_back(std::move(cond));
    e.args.push_back(std::move(then_expr));
    e.args.push_back(std::move(else_expr));
    return e;
}

bool Expr::operator==(const Expr& other) const {
    return kind == other.kind && width == other.width && value == other.value &&
           name == other.name && args == other.args;
}

const SignalDecl* Design::find(std::string_view signal) const {
    for (const auto& d : decls) {
        if (d.name == signal) {
            return &d;
        }
    }
    return nullptr;
}

std::vector<std::string> list_signals(const Design& design) {
    std::vector<std::string> names;
    names.reserve(design.decls.size());
    for (const auto& d : design.decls) {
        names.push_back(d.name);
    }
    return names;
}

namespace {

using DeclIndex = std::unordered_map<std::string_view, const SignalDecl*>;

void collect_refs(const Expr& e, std::vector<std::string_view>& out) {
    if (e.kind == ExprKind::Ref) {
        out.push_back(e.name);
    }
    for (const auto& a : e.args) {
        collect_refs(a, out);
    }
}

void check_expr(const Expr& e, const DeclIndex& index, const std::string& context) {
    auto fail = [&](const std::string& msg) { throw DesignError(context + ": " + msg); };
    if (e.width < 1 || e.width > kMaxWidth) {
        fail("expression width " + std::to_string(e.width) + " out of range");
    }
    for (const auto& a : e.args) {
        check_expr(a, index, context);
    }
    switch (e.kind) {
        case ExprKind::Const:
            if (e.value > width_mask(e.width)) {
                fail("constant " + std::to_string(e.value) + " does not fit in " +
                     std::to_string(e.width) + " bits");
            }
            break;
        case ExprKind::Ref: {
            auto it = index.find(e.name);
            if (it == index.end()) {
                fail("unknown identifier '" + e.name + "'");
            }
            if (it->second->width != e.width) {
                fail("width mismatch on '" + e.name + "'");
            }
            break;
        }
        case ExprKind::Not:
            if (e.args.size() != 1 || e.args[0].width != e.width) {
                fail("malformed '~'");
            }
            break;
        case ExprKind::And:
        case ExprKind::Or:
        case ExprKind::Xor:
        case ExprKind::Add:
            if (e.args.size() != 2 || e.args[0].width != e.width || e.args[1].width != e.width) {
                fail("width mismatch in '" + std::string(to_string(e.kind)) + "'");
            }
            break;
        case ExprKind::Eq:
        case ExprKind::Ne:
        case ExprKind::Lt:
            if (e.args.size() != 2 || e.width != 1) {
                fail("malformed comparison");
            }
            break;
        case ExprKind::Mux:
            if (e.args.size() != 3 || e.args[1].width != e.width || e.args[2].width != e.width) {
                fail("mux arms must have equal width");
            }
            break;
    }
}

// Wire -> wires it reads, in declaration order.
std::vector<std::vector<std::size_t>> wire_dependencies(const Design& design,
                                                        const std::vector<std::size_t>& wires) {
    std::unordered_map<std::string_view, std::size_t> wire_pos;
    for (std::size_t i = 0; i < wires.size(); ++i) {
        wire_pos.emplace(design.decls[wires[i]].name, i);
    }
    std::vector<std::vector<std::size_t>> deps(wires.size());
    for (std::size_t i = 0; i < wires.size(); ++i) {
        auto it = design.assigns.find(design.decls[wires[i]].name);
        if (it == design.assigns.end()) {
            continue;
        }
        std::vector<std::string_view> refs;
        collect_refs(it->second, refs);
        for (auto r : refs) {
            if (auto w = wire_pos.find(r); w != wire_pos.end()) {
                deps[i].push_back(w->second);
            }
        }
        std::sort(deps[i].begin(), deps[i].end());
        deps[i].erase(std::unique(deps[i].begin(), deps[i].end()), deps[i].end());
    }
    return deps;
}

std::vector<std::string> find_cycle(const Design& design, const std::vector<std::size_t>& wires,
                                    const std::vector<std::vector<std::size_t>>& deps) {
    enum class Color : char { White, Grey, Black };
    std::vector<Color> color(wires.size(), Color::White);
    std::vector<std::size_t> path;
    std::vector<std::size_t> next_edge(wires.size(), 0);

    for (std::size_t root = 0; root < wires.size(); ++root) {
        if (color[root] != Color::White) {
            continue;
        }
        path.push_back(root);
        color[root] = Color::Grey;
        while (!path.empty()) {
            std::size_t node = path.back();
            if (next_edge[node] < deps[node].size()) {
                std::size_t succ = deps[node][next_edge[node]++];
                if (color[succ] == Color::Grey) {
                    auto start = std::find(path.begin(), path.end(), succ);
                    std::vector<std::string> members;
                    for (auto it = start; it != path.end(); ++it) {
                        members.push_back(design.decls[wires[*it]].name);
                    }
                    std::sort(members.begin(), members.end());
                    return members;
                }
                if (color[succ] == Color::White) {
                    color[succ] = Color::Grey;
                    path.push_back(succ);
                }
            } else {
                color[node] = Color::Black;
                path.pop_back();
            }
        }
    }
    return {};
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i != 0) {
            out += sep;
        }
        out += items[i];
    }
    return out;
}

}  // namespace

std::vector<std::string> evaluation_order(const Design& design) {
    std::vector<std::string> order;
    std::vector<std::size_t> wires;
    for (std::size_t i = 0; i < design.decls.size(); ++i) {
        if (design.decls[i].kind == SignalKind::Wire) {
            wires.push_back(i);
        } else {
            order.push_back(design.decls[i].name);
        }
    }

    // Kahn's algorithm; the min-heap keeps ties in declaration order.
    auto deps = wire_dependencies(design, wires);
    std::vector<std::size_t> pending(wires.size());
    std::vector<std::vector<std::size_t>> readers(wires.size());
    for (std::size_t i = 0; i < wires.size(); ++i) {
        pending[i] = deps[i].size();
        for (auto d : deps[i]) {
            readers[d].push_back(i);
        }
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (pending[i] == 0) {
            ready.push(i);
        }
    }
    std::size_t emitted = 0;
    while (!ready.empty()) {
        std::size_t w = ready.top();
        ready.pop();
        order.push_back(design.decls[wires[w]].name);
        ++emitted;
        for (auto r : readers[w]) {
            if (--pending[r] == 0) {
                ready.push(r);
            }
        }
    }
    if (emitted != wires.size()) {
        auto members = find_cycle(design, wires, deps);
        auto what = "combinational cycle through {" + join(members, ", ") + "}";
        throw DesignError(what, std::move(members));
    }
    return order;
}

void validate(const Design& design) {
    DeclIndex index;
    std::vector<std::string> declared_inputs;
    for (const auto& d : design.decls) {
        if (d.name.empty()) {
            throw DesignError("empty signal name");
        }
        if (!index.emplace(d.name, &d).second) {
            throw DesignError("duplicate declaration of '" + d.name + "'");
        }
        if (d.width < 1 || d.width > kMaxWidth) {
            throw DesignError("signal '" + d.name + "' has width " + std::to_string(d.width) +
                              "; must be 1.." + std::to_string(kMaxWidth));
        }
        if (d.kind == SignalKind::Reg && d.reset_value > width_mask(d.width)) {
            throw DesignError("reset value of '" + d.name + "' does not fit in " +
                              std::to_string(d.width) + " bits");
        }
        if (d.kind == SignalKind::Input) {
            declared_inputs.push_back(d.name);
        }
    }
    if (declared_inputs != design.inputs) {
        throw DesignError("input list does not match input declarations");
    }

    for (const auto& [target, expr] : design.assigns) {
        auto it = index.find(target);
        if (it == index.end()) {
            throw DesignError("assign to undeclared signal '" + target + "'");
        }
        if (it->second->kind != SignalKind::Wire) {
            throw DesignError("assign target '" + target + "' is a " +
                              std::string(to_string(it->second->kind)) + ", not a wire");
        }
        check_expr(expr, index, "assign " + target);
        if (expr.width != it->second->width) {
            throw DesignError("assign " + target + ": width mismatch");
        }
    }
    for (const auto& [target, expr] : design.updates) {
        auto it = index.find(target);
        if (it == index.end()) {
            throw DesignError("update of undeclared signal '" + target + "'");
        }
        if (it->second->kind != SignalKind::Reg) {
            throw DesignError("always target '" + target + "' is a " +
                              std::string(to_string(it->second->kind)) + ", not a reg");
        }
        check_expr(expr, index, "always " + target);
        if (expr.width != it->second->width) {
            throw DesignError("always " + target + ": width mismatch");
        }
    }
    for (const auto& d : design.decls) {
        if (d.kind == SignalKind::Wire && !design.assigns.contains(d.name)) {
            throw DesignError("dangling wire '" + d.name + "' has no assign");
        }
        if (d.kind == SignalKind::Reg && !design.updates.contains(d.name)) {
            throw DesignError("reg '" + d.name + "' has no always update");
        }
    }
    evaluation_order(design);
}

Design load_design(std::string_view text) {
    Design d = parse_design(text);
    validate(d);
    return d;
}

Design load_design_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open design file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_design(ss.str());
}

namespace {

void print_operand(const Expr& e, std::string& out);

void print_into(const Expr& e, std::string& out) {
    switch (e.kind) {
        case ExprKind::Const:
            out += std::to_string(e.value);
            return;
        case ExprKind::Ref:
            out += e.name;
            return;
        case ExprKind::Not:
            out += '~';
            print_operand(e.args[0], out);
            return;
        case ExprKind::Mux:
            out += "mux(";
            print_into(e.args[0], out);
            out += ", ";
            print_into(e.args[1], out);
            out += ", ";
            print_into(e.args[2], out);
            out += ')';
            return;
        default:
            print_operand(e.args[0], out);
            out += ' ';
            out += to_string(e.kind);
            out += ' ';
            print_operand(e.args[1], out);
            return;
    }
}

void print_operand(const Expr& e, std::string& out) {
    bool compound = is_arithmetic(e.kind) || is_comparison(e.kind);
    if (compound) {
        out += '(';
    }
    print_into(e, out);
    if (compound) {
        out += ')';
    }
}

}  // namespace

std::string print_expr(const Expr& expr) {
    std::string out;
    print_into(expr, out);
    return out;
}

std::string print_design(const Design& design) {
    std::string out = "design " + design.name + "\n";
    for (const auto& d : design.decls) {
        out += std::string(to_string(d.kind)) + " " + d.name + " : " + std::to_string(d.width);
        if (d.kind == SignalKind::Reg) {
            out += " = " + std::to_string(d.reset_value);
        }
        out += '\n';
    }
    for (const auto& d : design.decls) {
        if (auto it = design.assigns.find(d.name); it != design.assigns.end()) {
            out += "assign " + d.name + " = " + print_expr(it->second) + "\n";
        }
    }
    for (const auto& d : design.decls) {
        if (auto it = design.updates.find(d.name); it != design.updates.end()) {
            out += "always " + d.name + " <= " + print_expr(it->second) + "\n";
        }
    }
    return out;
}

}  // namespace flowmine
