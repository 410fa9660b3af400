#include "flowmine/predicate.hpp"

#include <algorithm>
#include <cctype>

#include "text_util.hpp"

namespace flowmine {

std::string_view to_string(RowPos row) {
    switch (row) {
        case RowPos::Prior: return "prior";
        case RowPos::Flow: return "flow";
        case RowPos::Both: return "both";
    }
    return "?";
}

Predicate Predicate::membership(std::string r, std::vector<std::uint64_t> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return {PredicateKind::Membership, std::move(r), {}, std::move(values)};
}

Predicate Predicate::eq_sig(std::string a, std::string b) {
    if (b < a) {
        std::swap(a, b);
    }
    return {PredicateKind::EqSig, std::move(a), std::move(b), {}};
}

Predicate Predicate::neq_sig(std::string a, std::string b) {
    if (b < a) {
        std::swap(a, b);
    }
    return {PredicateKind::NeqSig, std::move(a), std::move(b), {}};
}

Predicate Predicate::prev_eq(std::string r) { return {PredicateKind::PrevEq, std::move(r), {}, {}}; }

Predicate Predicate::eq_const(std::string r, std::uint64_t c) {
    return {PredicateKind::EqConst, std::move(r), {}, {c}};
}

Predicate Predicate::neq_const(std::string r, std::uint64_t c) {
    return {PredicateKind::NeqConst, std::move(r), {}, {c}};
}

SignalTable::SignalTable(std::vector<std::string> names, std::vector<unsigned> widths)
    : names_(std::move(names)), widths_(std::move(widths)) {
    if (widths_.empty()) {
        widths_.assign(names_.size(), 0);
    }
    if (widths_.size() != names_.size()) {
        throw InputError("signal table: widths do not match names");
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
        index_.emplace(names_[i], i);
    }
}

std::size_t SignalTable::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        throw InputError("unknown signal '" + std::string(name) + "'");
    }
    return it->second;
}

unsigned SignalTable::width_of(std::string_view name) const { return widths_[index_of(name)]; }

bool SignalTable::comparable(std::size_t a, std::size_t b) const {
    return widths_[a] == 0 || widths_[b] == 0 || widths_[a] == widths_[b];
}

bool holds_on_row(const Predicate& p, std::span<const std::uint64_t> row, const SignalTable& table) {
    auto v = row[table.index_of(p.lhs)];
    switch (p.kind) {
        case PredicateKind::Membership:
            return std::binary_search(p.values.begin(), p.values.end(), v);
        case PredicateKind::EqSig:
            return v == row[table.index_of(p.rhs)];
        case PredicateKind::NeqSig:
            return v != row[table.index_of(p.rhs)];
        case PredicateKind::EqConst:
            return v == p.values.at(0);
        case PredicateKind::NeqConst:
            return v != p.values.at(0);
        case PredicateKind::PrevEq:
            break;
    }
    throw InvariantViolation("r == prev(r) needs two rows");
}

bool holds_across(const Predicate& p, std::span<const std::uint64_t> before,
                  std::span<const std::uint64_t> after, const SignalTable& table) {
    if (p.kind != PredicateKind::PrevEq) {
        throw InvariantViolation("only r == prev(r) spans two rows");
    }
    auto i = table.index_of(p.lhs);
    return before[i] == after[i];
}

std::string format_predicate(const Predicate& p) {
    switch (p.kind) {
        case PredicateKind::Membership: {
            std::vector<std::string> vs;
            for (auto v : p.values) {
                vs.push_back(std::to_string(v));
            }
            return p.lhs + " in {" + detail::join(vs, ", ") + "}";
        }
        case PredicateKind::EqSig: return p.lhs + " == " + p.rhs;
        case PredicateKind::NeqSig: return p.lhs + " != " + p.rhs;
        case PredicateKind::PrevEq: return p.lhs + " == prev(" + p.lhs + ")";
        case PredicateKind::EqConst: return p.lhs + " == " + std::to_string(p.values.at(0));
        case PredicateKind::NeqConst: return p.lhs + " != " + std::to_string(p.values.at(0));
    }
    return {};
}

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

}  // namespace

Predicate parse_predicate(std::string_view text) {
    auto bad = [&] { return InputError("malformed predicate '" + std::string(text) + "'"); };
    auto t = detail::trim(text);

    if (auto in = t.find(" in {"); in != std::string_view::npos) {
        auto name = detail::trim(t.substr(0, in));
        auto body = t.substr(in + 5);
        if (!is_identifier(name) || body.empty() || body.back() != '}') {
            throw bad();
        }
        body.remove_suffix(1);
        std::vector<std::uint64_t> values;
        for (auto v : detail::split(body, ',')) {
            auto n = detail::parse_uint(v);
            if (!n) {
                throw bad();
            }
            values.push_back(*n);
        }
        if (values.empty() || values.size() > kMaxMembershipValues) {
            throw bad();
        }
        return Predicate::membership(std::string(name), std::move(values));
    }

    bool eq = true;
    auto op = t.find(" == ");
    if (op == std::string_view::npos) {
        op = t.find(" != ");
        eq = false;
    }
    if (op == std::string_view::npos) {
        throw bad();
    }
    auto lhs = detail::trim(t.substr(0, op));
    auto rhs = detail::trim(t.substr(op + 4));
    if (!is_identifier(lhs)) {
        throw bad();
    }
    if (auto c = detail::parse_uint(rhs)) {
        return eq ? Predicate::eq_const(std::string(lhs), *c) : Predicate::neq_const(std::string(lhs), *c);
    }
    if (eq && rhs == "prev(" + std::string(lhs) + ")") {
        return Predicate::prev_eq(std::string(lhs));
    }
    if (!is_identifier(rhs) || lhs == rhs) {
        throw bad();
    }
    return eq ? Predicate::eq_sig(std::string(lhs), std::string(rhs))
              : Predicate::neq_sig(std::string(lhs), std::string(rhs));
}

}  // namespace flowmine
