#include "flowmine/specification.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "text_util.hpp"

namespace flowmine {

ConditionSet eliminate_trace_invariants(const ConditionSet& cs, const std::vector<Predicate>& invariants,
                                        const SignalTable& table) {
    std::set<Predicate> drop(invariants.begin(), invariants.end());
    ConditionSet out;
    out.case_id = cs.case_id;
    out.unconditioned = cs.unconditioned;
    for (const auto& c : cs.conditions) {
        if (!drop.contains(c.pred)) {
            out.conditions.push_back(c);
        }
    }
    out.conditions = normalize_conditions(std::move(out.conditions), table);
    return out;
}

std::vector<Condition> normalize_conditions(std::vector<Condition> conditions, const SignalTable& table) {
    struct Forms {
        const Condition* membership = nullptr;
        const Condition* eq_zero = nullptr;
        const Condition* ne_zero = nullptr;
    };
    std::map<std::pair<RowPos, std::string>, Forms> by_signal;
    for (const auto& c : conditions) {
        auto& f = by_signal[{c.row, c.pred.lhs}];
        const auto& p = c.pred;
        if (p.kind == PredicateKind::Membership) {
            f.membership = &c;
        } else if (p.kind == PredicateKind::EqConst && p.values[0] == 0) {
            f.eq_zero = &c;
        } else if (p.kind == PredicateKind::NeqConst && p.values[0] == 0) {
            f.ne_zero = &c;
        }
    }
    std::set<const Condition*> redundant;
    for (const auto& [key, f] : by_signal) {
        if (f.membership == nullptr) {
            continue;
        }
        const auto& values = f.membership->pred.values;
        bool has_zero = std::binary_search(values.begin(), values.end(), std::uint64_t{0});
        unsigned width = table.width_of(key.second);
        if (f.eq_zero != nullptr && values == std::vector<std::uint64_t>{0}) {
            redundant.insert(f.membership);
        } else if (f.ne_zero != nullptr && width == 1 && values == std::vector<std::uint64_t>{1}) {
            redundant.insert(f.membership);
        } else if (f.ne_zero != nullptr && !has_zero) {
            redundant.insert(f.ne_zero);
        }
    }
    // A comparison between two signals that are both pinned to a constant
    // on its row says nothing new.
    std::map<std::pair<RowPos, std::string>, std::uint64_t> pinned;
    for (const auto& c : conditions) {
        const auto& p = c.pred;
        if (p.kind == PredicateKind::EqConst || (p.kind == PredicateKind::Membership && p.values.size() == 1)) {
            pinned[{c.row, p.lhs}] = p.values[0];
        } else if (p.kind == PredicateKind::NeqConst && p.values[0] == 0 && table.width_of(p.lhs) == 1) {
            pinned[{c.row, p.lhs}] = 1;
        }
    }
    auto is_pinned = [&](RowPos row, const std::string& s) { return pinned.contains({row, s}); };
    for (const auto& c : conditions) {
        const auto& p = c.pred;
        bool implied = false;
        if (p.kind == PredicateKind::EqSig || p.kind == PredicateKind::NeqSig) {
            implied = is_pinned(c.row, p.lhs) && is_pinned(c.row, p.rhs);
        } else if (p.kind == PredicateKind::PrevEq) {
            implied = is_pinned(RowPos::Prior, p.lhs) && is_pinned(RowPos::Flow, p.lhs);
        }
        if (implied) {
            redundant.insert(&c);
        }
    }

    std::vector<Condition> out;
    for (const auto& c : conditions) {
        if (!redundant.contains(&c)) {
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Property> merge_properties(const std::vector<MinedCase>& cases) {
    std::vector<const MinedCase*> ordered;
    for (const auto& mc : cases) {
        ordered.push_back(&mc);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const MinedCase* a, const MinedCase* b) { return a->first.id < b->first.id; });

    std::vector<Property> out;
    std::map<std::pair<std::vector<std::size_t>, std::vector<Condition>>, std::size_t> slot;
    std::vector<std::set<std::string>> sources, sinks;
    for (const auto* mc : ordered) {
        const auto& [fc, cs] = *mc;
        auto key = std::make_pair(fc.times, cs.conditions);
        auto [it, fresh] = slot.emplace(std::move(key), out.size());
        if (fresh) {
            Property p;
            p.kind = PropertyKind::ConditionalFlow;
            p.number = out.size();
            p.conditions = cs.conditions;
            p.times = fc.times;
            out.push_back(std::move(p));
            sources.emplace_back();
            sinks.emplace_back();
        }
        auto k = it->second;
        out[k].case_ids.push_back(fc.id);
        for (const auto& pair : fc.pairs) {
            sources[k].insert(pair.src);
            sinks[k].insert(pair.sink);
        }
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].sources.assign(sources[k].begin(), sources[k].end());
        out[k].sinks.assign(sinks[k].begin(), sinks[k].end());
    }
    return out;
}

namespace {

std::string braced_list(const std::vector<std::string>& names) {
    return "{" + detail::join(names, ", ") + "}";
}

std::string values_list(const std::vector<std::uint64_t>& values) {
    std::vector<std::string> vs;
    for (auto v : values) {
        vs.push_back(std::to_string(v));
    }
    return "{" + detail::join(vs, ", ") + "}";
}

// Prior-row operands read as prev(x): at flow time i that is x at i-1.
std::string operand(const std::string& name, RowPos row) {
    return row == RowPos::Prior ? "prev(" + name + ")" : name;
}

std::string format_condition(const Condition& c) {
    const auto& p = c.pred;
    switch (p.kind) {
        case PredicateKind::Membership: return operand(p.lhs, c.row) + " in " + values_list(p.values);
        case PredicateKind::EqSig: return operand(p.lhs, c.row) + " == " + operand(p.rhs, c.row);
        case PredicateKind::NeqSig: return operand(p.lhs, c.row) + " != " + operand(p.rhs, c.row);
        case PredicateKind::PrevEq: return p.lhs + " == prev(" + p.lhs + ")";
        case PredicateKind::EqConst:
            return operand(p.lhs, c.row) + " == " + std::to_string(p.values[0]);
        case PredicateKind::NeqConst:
            return operand(p.lhs, c.row) + " != " + std::to_string(p.values[0]);
    }
    return {};
}

struct GroupLine {
    PredicateKind kind;
    RowPos row;
    const char* text;
};

// Zero comparisons are grouped; _inv_ ranges over the row before the
// flow, _r_ over the row the flow lands on.
constexpr GroupLine kGroupLines[] = {
    {PredicateKind::EqConst, RowPos::Prior, "0 == _inv_ in "},
    {PredicateKind::NeqConst, RowPos::Prior, "0 != _inv_ in "},
    {PredicateKind::EqConst, RowPos::Flow, "0 == _r_ in "},
    {PredicateKind::NeqConst, RowPos::Flow, "0 != _r_ in "},
};

bool grouped(const Condition& c) { return c.pred.is_constant_form() && c.pred.values[0] == 0; }

}  // namespace

std::string format_condition_lines(const std::vector<Condition>& conditions) {
    std::string out;
    for (const auto& g : kGroupLines) {
        std::vector<std::string> names;
        for (const auto& c : conditions) {
            if (grouped(c) && c.pred.kind == g.kind && c.row == g.row) {
                names.push_back(c.pred.lhs);
            }
        }
        if (!names.empty()) {
            std::sort(names.begin(), names.end());
            out += g.text + braced_list(names) + "\n";
        }
    }
    for (const auto& c : conditions) {
        if (!grouped(c)) {
            out += format_condition(c) + "\n";
        }
    }
    return out;
}

void emit_specification(const std::vector<Property>& properties, const std::vector<FlowPair>& no_flow,
                        std::ostream& out) {
    for (const auto& p : properties) {
        std::vector<std::string> ids;
        for (auto id : p.case_ids) {
            ids.push_back(std::to_string(id));
        }
        out << "case " << p.number << ": " << detail::join(ids, "_") << '\n';
        out << "\t_src_ in " << braced_list(p.sources) << '\n';
        out << "\t=/=>\n";
        out << "\t_snk_ in " << braced_list(p.sinks) << '\n';
        if (!p.conditions.empty()) {
            out << "\tunless\n";
            out << format_condition_lines(p.conditions);
        }
        out << '\n';
    }
    for (const auto& nf : no_flow) {
        out << nf.src << " =/=> " << nf.sink << '\n';
    }
}

}  // namespace flowmine
