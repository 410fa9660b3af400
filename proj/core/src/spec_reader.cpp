#include <algorithm>
#include <istream>

#include "flowmine/specification.hpp"
#include "text_util.hpp"

namespace flowmine {

namespace {

class SpecReader {
public:
    explicit SpecReader(std::istream& in) : in_(in) {}

    Specification read() {
        Specification spec;
        bool in_block = false;
        bool unless = false;
        auto close_block = [&] {
            if (in_block && unless && spec.properties.back().conditions.empty()) {
                throw fail("'unless' without conditions");
            }
            in_block = false;
            unless = false;
        };
        std::string line;
        while (next(line)) {
            auto t = detail::trim(line);
            if (t.empty()) {
                close_block();
                continue;
            }
            if (line.starts_with("case ")) {
                close_block();
                if (!spec.no_flow.empty()) {
                    throw fail("flow property after the no-flow pairs");
                }
                spec.properties.push_back(header(line));
                body(spec.properties.back());
                in_block = true;
                continue;
            }
            if (auto op = t.find(" =/=> "); op != std::string_view::npos && line.front() != '\t') {
                close_block();
                spec.no_flow.push_back({name(t.substr(0, op)), name(t.substr(op + 6))});
                continue;
            }
            if (in_block && !unless && line == "\tunless") {
                unless = true;
                continue;
            }
            if (!unless) {
                throw fail("unexpected line");
            }
            condition(t, spec.properties.back());
        }
        close_block();
        for (auto& p : spec.properties) {
            std::sort(p.conditions.begin(), p.conditions.end());
        }
        return spec;
    }

private:
    bool next(std::string& line) {
        if (!detail::read_line(in_, line)) {
            return false;
        }
        ++line_no_;
        current_ = line;
        return true;
    }

    ParseError fail(const std::string& msg) const {
        return ParseError(msg + ": '" + current_ + "'", line_no_);
    }

    std::string name(std::string_view s) const {
        s = detail::trim(s);
        if (s.empty() || s.find_first_of(" \t{},") != std::string_view::npos) {
            throw fail("bad signal name");
        }
        return std::string(s);
    }

    std::vector<std::string> names(std::string_view braced) const {
        braced = detail::trim(braced);
        if (braced.size() < 2 || braced.front() != '{' || braced.back() != '}') {
            throw fail("expected {name, ...}");
        }
        std::vector<std::string> out;
        for (auto n : detail::split(braced.substr(1, braced.size() - 2), ',')) {
            out.push_back(name(n));
        }
        return out;
    }

    Property header(const std::string& line) {
        auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw fail("expected 'case <n>: <ids>'");
        }
        Property p;
        auto number = detail::parse_uint(std::string_view(line).substr(5, colon - 5));
        if (!number) {
            throw fail("bad property number");
        }
        p.number = *number;
        for (auto id : detail::split(std::string_view(line).substr(colon + 1), '_')) {
            auto v = detail::parse_uint(id);
            if (!v) {
                throw fail("bad case id");
            }
            p.case_ids.push_back(*v);
        }
        return p;
    }

    void expect_prefix(std::string_view prefix, std::string& line) {
        if (!next(line) || !line.starts_with(prefix)) {
            throw fail("expected '" + std::string(detail::trim(prefix)) + "'");
        }
    }

    void body(Property& p) {
        std::string line;
        expect_prefix("\t_src_ in ", line);
        p.sources = names(std::string_view(line).substr(10));
        expect_prefix("\t=/=>", line);
        if (detail::trim(line) != "=/=>") {
            throw fail("expected '=/=>'");
        }
        expect_prefix("\t_snk_ in ", line);
        p.sinks = names(std::string_view(line).substr(10));
    }

    struct Group {
        std::string_view prefix;
        PredicateKind kind;
        RowPos row;
    };
    static constexpr Group kGroups[] = {
        {"0 == _inv_ in ", PredicateKind::EqConst, RowPos::Prior},
        {"0 != _inv_ in ", PredicateKind::NeqConst, RowPos::Prior},
        {"0 == _r_ in ", PredicateKind::EqConst, RowPos::Flow},
        {"0 != _r_ in ", PredicateKind::NeqConst, RowPos::Flow},
    };

    void condition(std::string_view t, Property& p) {
        for (const auto& g : kGroups) {
            if (t.starts_with(g.prefix)) {
                for (auto& n : names(t.substr(g.prefix.size()))) {
                    Predicate pred = g.kind == PredicateKind::EqConst ? Predicate::eq_const(std::move(n))
                                                                      : Predicate::neq_const(std::move(n));
                    p.conditions.push_back({std::move(pred), g.row});
                }
                return;
            }
        }
        Condition c;
        try {
            if (t.starts_with("prev(")) {
                c.row = RowPos::Prior;
                c.pred = parse_predicate(strip_prev(t));
            } else {
                c.pred = parse_predicate(t);
                c.row = c.pred.spans_rows() ? RowPos::Both : RowPos::Flow;
            }
        } catch (const InputError& e) {
            throw fail(e.what());
        }
        if (c.row == RowPos::Prior && c.pred.spans_rows()) {
            throw fail("bad prior-row condition");
        }
        p.conditions.push_back(std::move(c));
    }

    // "prev(a) == prev(b)" -> "a == b"
    std::string strip_prev(std::string_view t) const {
        std::string out;
        while (!t.empty()) {
            if (t.starts_with("prev(")) {
                auto close = t.find(')');
                if (close == std::string_view::npos) {
                    throw fail("unbalanced prev(");
                }
                out += t.substr(5, close - 5);
                t.remove_prefix(close + 1);
            } else if (t.starts_with(" == ") || t.starts_with(" != ")) {
                out += t.substr(0, 4);
                t.remove_prefix(4);
                if (!t.starts_with("prev(")) {
                    throw fail("mixed prev() operands");
                }
            } else if (t.starts_with(" in {")) {
                out += t;
                break;
            } else {
                throw fail("bad prior-row condition");
            }
        }
        return out;
    }

    std::istream& in_;
    std::size_t line_no_ = 0;
    std::string current_;
};

}  // namespace

Specification read_specification(std::istream& in) { return SpecReader(in).read(); }

}  // namespace flowmine
