#include "flowmine/miner.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "parallel.hpp"
#include "text_util.hpp"

namespace flowmine {

namespace {

// A candidate with its signal columns resolved.
struct Candidate {
    Condition cond;
    std::size_t a = 0;
    std::size_t b = 0;
};

bool eval_row(const Candidate& c, std::span<const std::uint64_t> row) {
    const auto& p = c.cond.pred;
    auto v = row[c.a];
    switch (p.kind) {
        case PredicateKind::Membership: return std::binary_search(p.values.begin(), p.values.end(), v);
        case PredicateKind::EqSig: return v == row[c.b];
        case PredicateKind::NeqSig: return v != row[c.b];
        case PredicateKind::EqConst: return v == p.values[0];
        case PredicateKind::NeqConst: return v != p.values[0];
        case PredicateKind::PrevEq: break;
    }
    return false;
}

bool eval_slice(const Candidate& c, const Slice& s) {
    switch (c.cond.row) {
        case RowPos::Prior: return eval_row(c, s.prior);
        case RowPos::Flow: return eval_row(c, s.flow);
        case RowPos::Both: return s.prior[c.a] == s.flow[c.a];
    }
    return false;
}

std::vector<Candidate> generate(const SignalTable& table, const std::vector<Slice>& slices) {
    std::vector<Candidate> out;
    if (slices.empty()) {
        return out;
    }
    const auto& names = table.names();
    const std::size_t n = names.size();
    for (RowPos row : {RowPos::Prior, RowPos::Flow}) {
        for (std::size_t i = 0; i < n; ++i) {
            std::set<std::uint64_t> seen;
            for (const auto& s : slices) {
                seen.insert(row == RowPos::Prior ? s.prior[i] : s.flow[i]);
                if (seen.size() > kMaxMembershipValues) {
                    break;
                }
            }
            if (seen.size() <= kMaxMembershipValues) {
                out.push_back({{Predicate::membership(names[i], {seen.begin(), seen.end()}), row}, i, 0});
            }
            out.push_back({{Predicate::eq_const(names[i]), row}, i, 0});
            out.push_back({{Predicate::neq_const(names[i]), row}, i, 0});
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || names[j] < names[i] || !table.comparable(i, j)) {
                    continue;
                }
                out.push_back({{Predicate::eq_sig(names[i], names[j]), row}, i, j});
                out.push_back({{Predicate::neq_sig(names[i], names[j]), row}, i, j});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({{Predicate::prev_eq(names[i]), RowPos::Both}, i, 0});
    }
    std::sort(out.begin(), out.end(),
              [](const Candidate& x, const Candidate& y) { return x.cond < y.cond; });
    return out;
}

}  // namespace

bool check_predicate(const Condition& c, const Slice& s, const SignalTable& table) {
    switch (c.row) {
        case RowPos::Prior: return holds_on_row(c.pred, s.prior, table);
        case RowPos::Flow: return holds_on_row(c.pred, s.flow, table);
        case RowPos::Both: return holds_across(c.pred, s.prior, s.flow, table);
    }
    return false;
}

std::vector<Condition> candidate_predicates(const SignalTable& table, const std::vector<Slice>& slices) {
    std::vector<Condition> out;
    for (auto& c : generate(table, slices)) {
        out.push_back(std::move(c.cond));
    }
    return out;
}

ConditionSet mine_conditions(const FlowCase& flow_case, const std::vector<Slice>& slices,
                             const SignalTable& table) {
    ConditionSet cs;
    cs.case_id = flow_case.id;
    if (slices.empty()) {
        cs.unconditioned = true;
        return cs;
    }
    for (auto& c : generate(table, slices)) {
        bool all = std::all_of(slices.begin(), slices.end(),
                               [&](const Slice& s) { return eval_slice(c, s); });
        if (all) {
            cs.conditions.push_back(std::move(c.cond));
        }
    }
    return cs;
}

std::vector<Slice> case_slices(const FlowCase& flow_case, const TraceSet& traces) {
    std::set<std::size_t> times;
    for (auto t : flow_case.times) {
        if (t != 0) {
            times.insert(t);
        }
    }
    std::set<std::string> sources;
    for (const auto& p : flow_case.pairs) {
        sources.insert(p.src);
    }
    std::vector<Slice> out;
    if (times.empty()) {
        return out;
    }
    for (const auto& src : sources) {
        const Trace* t = traces.find(src);
        if (t == nullptr) {
            throw InputError("flow case " + std::to_string(flow_case.id) + " names source '" + src +
                             "' but no trace exists for it");
        }
        auto part = slice(*t, times);
        std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
}

std::vector<Predicate> mine_trace_invariants(const TraceSet& traces) {
    SignalTable table(traces.signals, traces.widths);
    const std::size_t n = table.size();
    std::set<std::vector<std::uint64_t>> rows;
    std::vector<bool> steady(n, true);
    for (const auto& t : traces.traces) {
        for (std::size_t i = 0; i < t.states.size(); ++i) {
            rows.insert(t.states[i].values);
            if (i > 0) {
                for (std::size_t k = 0; k < n; ++k) {
                    if (t.states[i].values[k] != t.states[i - 1].values[k]) {
                        steady[k] = false;
                    }
                }
            }
        }
    }
    std::vector<Predicate> out;
    if (rows.empty()) {
        return out;
    }
    const auto& names = table.names();
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::uint64_t> seen;
        bool any_zero = false;
        bool all_zero = true;
        for (const auto& r : rows) {
            if (seen.size() <= kMaxMembershipValues) {
                seen.insert(r[i]);
            }
            any_zero = any_zero || r[i] == 0;
            all_zero = all_zero && r[i] == 0;
        }
        if (seen.size() <= kMaxMembershipValues) {
            out.push_back(Predicate::membership(names[i], {seen.begin(), seen.end()}));
        }
        if (all_zero) {
            out.push_back(Predicate::eq_const(names[i]));
        }
        if (!any_zero) {
            out.push_back(Predicate::neq_const(names[i]));
        }
        if (steady[i]) {
            out.push_back(Predicate::prev_eq(names[i]));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || names[j] < names[i] || !table.comparable(i, j)) {
                continue;
            }
            bool all_eq = true;
            bool all_ne = true;
            for (const auto& r : rows) {
                all_eq = all_eq && r[i] == r[j];
                all_ne = all_ne && r[i] != r[j];
            }
            if (all_eq) {
                out.push_back(Predicate::eq_sig(names[i], names[j]));
            }
            if (all_ne) {
                out.push_back(Predicate::neq_sig(names[i], names[j]));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ConditionSet> mine_all(const std::vector<FlowCase>& cases, const TraceSet& traces,
                                   unsigned jobs) {
    SignalTable table(traces.signals, traces.widths);
    std::vector<ConditionSet> out(cases.size());
    detail::parallel_for(cases.size(), jobs, [&](std::size_t k) {
        out[k] = mine_conditions(cases[k], case_slices(cases[k], traces), table);
    });
    return out;
}

void write_conditions(const std::vector<MinedCase>& mined, std::ostream& out) {
    for (const auto& [fc, cs] : mined) {
        out << format_flow_case(fc) << '\n';
        for (const auto& c : cs.conditions) {
            out << "case " << fc.id << ": " << to_string(c.row) << ' ' << format_predicate(c.pred) << '\n';
        }
    }
}

std::vector<MinedCase> read_conditions(std::istream& in) {
    std::vector<MinedCase> mined;
    std::map<std::size_t, std::size_t> position;
    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line)) {
        ++line_no;
        if (detail::trim(line).empty() || line.front() == '#') {
            continue;
        }
        auto fail = [&](const std::string& msg) {
            return ParseError(msg + ": '" + line + "'", line_no);
        };
        auto colon = line.find(": ");
        if (!line.starts_with("case ") || colon == std::string::npos) {
            throw fail("expected 'case <id>: ...'");
        }
        auto id = detail::parse_uint(std::string_view(line).substr(5, colon - 5));
        if (!id) {
            throw fail("bad case id");
        }
        std::string_view rest = std::string_view(line).substr(colon + 2);
        if (rest.starts_with("times=")) {
            FlowCase fc;
            try {
                fc = parse_flow_case(line);
            } catch (const InputError& e) {
                throw fail(e.what());
            }
            if (!position.emplace(fc.id, mined.size()).second) {
                throw fail("duplicate flow case");
            }
            ConditionSet cs;
            cs.case_id = fc.id;
            cs.unconditioned = fc.time_zero_only();
            mined.emplace_back(std::move(fc), std::move(cs));
            continue;
        }
        auto it = position.find(*id);
        if (it == position.end()) {
            throw fail("predicate before its flow case line");
        }
        auto space = rest.find(' ');
        auto pos = rest.substr(0, space);
        Condition c;
        if (pos == "prior") {
            c.row = RowPos::Prior;
        } else if (pos == "flow") {
            c.row = RowPos::Flow;
        } else if (pos == "both") {
            c.row = RowPos::Both;
        } else {
            throw fail("row position must be prior, flow or both");
        }
        try {
            c.pred = parse_predicate(rest.substr(space + 1));
        } catch (const InputError& e) {
            throw fail(e.what());
        }
        if ((c.row == RowPos::Both) != c.pred.spans_rows()) {
            throw fail("row position does not fit the predicate");
        }
        mined[it->second].second.conditions.push_back(std::move(c));
    }
    for (auto& [fc, cs] : mined) {
        std::sort(cs.conditions.begin(), cs.conditions.end());
    }
    return mined;
}

}  // namespace flowmine
