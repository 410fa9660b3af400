#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowmine/error.hpp"

namespace flowmine {

inline constexpr unsigned kMaxWidth = 64;

inline constexpr std::uint64_t width_mask(unsigned width) {
    return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

enum class SignalKind { Input, Wire, Reg };

std::string_view to_string(SignalKind kind);

struct SignalDecl {
    std::string name;
    unsigned width = 1;
    SignalKind kind = SignalKind::Input;
    std::uint64_t reset_value = 0;  // regs only

    bool operator==(const SignalDecl&) const = default;
};

enum class ExprKind { Const, Ref, Not, And, Or, Xor, Add, Eq, Ne, Lt, Mux };

std::string_view to_string(ExprKind kind);  // operator spelling, "mux", or kind name
bool is_arithmetic(ExprKind kind);           // & | ^ +
bool is_comparison(ExprKind kind);           // == != <

// Expression tree. Every node carries its result width; the factory
// functions compute it from the operands.
struct Expr {
    ExprKind kind = ExprKind::Const;
    unsigned width = 1;
    std::uint64_t value = 0;  // Const
    std::string name;         // Ref
    std::vector<Expr> args;

    static Expr constant(std::uint64_t value, unsigned width);
    static Expr ref(std::string name, unsigned width);
    static Expr bit_not(Expr operand);
    static Expr binary(ExprKind kind, Expr lhs, Expr rhs);
    static Expr mux(Expr cond, Expr then_expr, Expr else_expr);

    bool operator==(const Expr& other) const;
};

// One flattened synchronous module.
struct Design {
    std::string name;
    std::vector<SignalDecl> decls;
    std::map<std::string, Expr> assigns;  // wire -> combinational driver
    std::map<std::string, Expr> updates;  // reg  -> next-state expression
    std::vector<std::string> inputs;

    const SignalDecl* find(std::string_view name) const;

    bool operator==(const Design&) const = default;
};

// A design that fails validation. For combinational cycles, members()
// lists the wires on the cycle, sorted by name.
class DesignError : public InputError {
public:
    explicit DesignError(const std::string& what, std::vector<std::string> members = {})
        : InputError(what), members_(std::move(members)) {}

    const std::vector<std::string>& members() const noexcept { return members_; }

private:
    std::vector<std::string> members_;
};

// Parses the line-oriented design format. Structural checks that need the
// whole file (missing drivers, cycles) are left to validate().
Design parse_design(std::string_view text);

// Throws DesignError unless every Design invariant holds.
void validate(const Design& design);

// parse_design followed by validate.
Design load_design(std::string_view text);
Design load_design_file(const std::string& path);

// Declaration order. Defines both source enumeration and trace columns.
std::vector<std::string> list_signals(const Design& design);

// Inputs and regs in declaration order, then wires in dependency order
// (ties broken by declaration order). Throws DesignError on a cycle.
std::vector<std::string> evaluation_order(const Design& design);

std::string print_expr(const Expr& expr);
std::string print_design(const Design& design);

}  // namespace flowmine
