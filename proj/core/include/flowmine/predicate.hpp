#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "flowmine/error.hpp"

namespace flowmine {

inline constexpr std::size_t kMaxMembershipValues = 3;

// Templates, declared in canonical order.
enum class PredicateKind {
    Membership,  // r in {v...}, 1..3 values
    EqSig,       // r1 == r2
    NeqSig,      // r1 != r2
    PrevEq,      // r == prev(r)
    EqConst,     // r == 0
    NeqConst,    // r != 0
};

// Which row of a two-cycle slice a predicate is evaluated on. PrevEq
// always spans both rows.
enum class RowPos { Prior, Flow, Both };

std::string_view to_string(RowPos row);

struct Predicate {
    PredicateKind kind = PredicateKind::Membership;
    std::string lhs;
    std::string rhs;                    // EqSig / NeqSig, lhs < rhs
    std::vector<std::uint64_t> values;  // Membership (sorted), EqConst / NeqConst ({0})

    static Predicate membership(std::string r, std::vector<std::uint64_t> values);
    static Predicate eq_sig(std::string a, std::string b);
    static Predicate neq_sig(std::string a, std::string b);
    static Predicate prev_eq(std::string r);
    static Predicate eq_const(std::string r, std::uint64_t c = 0);
    static Predicate neq_const(std::string r, std::uint64_t c = 0);

    bool spans_rows() const { return kind == PredicateKind::PrevEq; }
    bool is_constant_form() const {
        return kind == PredicateKind::EqConst || kind == PredicateKind::NeqConst;
    }

    auto operator<=>(const Predicate&) const = default;
};

// A predicate annotated with the slice row it holds on.
struct Condition {
    Predicate pred;
    RowPos row = RowPos::Flow;

    auto operator<=>(const Condition&) const = default;
};

// Signal names with widths; width 0 means unknown.
class SignalTable {
public:
    SignalTable() = default;
    SignalTable(std::vector<std::string> names, std::vector<unsigned> widths);

    const std::vector<std::string>& names() const { return names_; }
    const std::vector<unsigned>& widths() const { return widths_; }
    std::size_t size() const { return names_.size(); }
    std::size_t index_of(std::string_view name) const;  // throws InputError
    unsigned width_of(std::string_view name) const;
    bool comparable(std::size_t a, std::size_t b) const;

private:
    std::vector<std::string> names_;
    std::vector<unsigned> widths_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Single-row truth. PrevEq is not defined on one row.
bool holds_on_row(const Predicate& p, std::span<const std::uint64_t> row, const SignalTable& table);

// PrevEq across two consecutive rows.
bool holds_across(const Predicate& p, std::span<const std::uint64_t> before,
                  std::span<const std::uint64_t> after, const SignalTable& table);

// Raw template text: "r in {1, 2}", "a == b", "a != b", "r == prev(r)",
// "r == 0", "r != 0".
std::string format_predicate(const Predicate& p);
Predicate parse_predicate(std::string_view text);  // throws InputError

}  // namespace flowmine
