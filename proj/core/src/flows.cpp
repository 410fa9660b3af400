#include "flowmine/flows.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "parallel.hpp"
#include "text_util.hpp"

namespace flowmine {

std::vector<TimeOfFlow> find_time_of_flow(const Trace& trace) {
    std::vector<TimeOfFlow> out;
    const std::size_t n = trace.signals.size();
    for (std::size_t s = 0; s < n; ++s) {
        if (trace.signals[s] == trace.source) {
            continue;
        }
        std::vector<std::size_t> times;
        for (std::size_t i = 0; i < trace.states.size(); ++i) {
            bool now = trace.states[i].taints[s] != 0;
            bool before = i > 0 && trace.states[i - 1].taints[s] != 0;
            if (now && !before) {
                times.push_back(i);
            }
        }
        if (!times.empty()) {
            out.push_back({trace.source, trace.signals[s], std::move(times)});
        }
    }
    return out;
}

std::vector<FlowCase> group_flows(const std::vector<TimeOfFlow>& tuples) {
    std::map<std::vector<std::size_t>, std::vector<FlowPair>> by_times;
    for (const auto& t : tuples) {
        by_times[t.times].push_back({t.src, t.sink});
    }
    std::vector<FlowCase> cases;
    cases.reserve(by_times.size());
    for (auto& [times, pairs] : by_times) {
        std::sort(pairs.begin(), pairs.end());
        cases.push_back({cases.size(), times, std::move(pairs)});
    }
    return cases;
}

std::vector<FlowPair> no_flow_set(const std::vector<std::string>& signals,
                                  const std::vector<std::string>& traced_sources,
                                  const std::vector<TimeOfFlow>& tuples) {
    std::set<std::pair<std::string_view, std::string_view>> flowing;
    for (const auto& t : tuples) {
        flowing.emplace(t.src, t.sink);
    }
    std::set<std::string_view> traced(traced_sources.begin(), traced_sources.end());
    std::vector<FlowPair> out;
    for (const auto& src : signals) {
        if (!traced.contains(src)) {
            continue;
        }
        for (const auto& sink : signals) {
            if (sink != src && !flowing.contains({src, sink})) {
                out.push_back({src, sink});
            }
        }
    }
    return out;
}

FlowAnalysis analyze_flows(const TraceSet& traces, unsigned jobs) {
    std::vector<std::vector<TimeOfFlow>> per_trace(traces.traces.size());
    detail::parallel_for(per_trace.size(), jobs,
                         [&](std::size_t k) { per_trace[k] = find_time_of_flow(traces.traces[k]); });

    FlowAnalysis a;
    for (auto& v : per_trace) {
        std::move(v.begin(), v.end(), std::back_inserter(a.tuples));
    }
    a.cases = group_flows(a.tuples);
    auto sources = traces.sources();
    a.no_flow = no_flow_set(traces.signals, sources, a.tuples);
    std::set<std::string_view> traced(sources.begin(), sources.end());
    for (const auto& s : traces.signals) {
        if (!traced.contains(s)) {
            a.untraced.push_back(s);
        }
    }
    check_flow_partition(traces, a);
    return a;
}

void check_flow_partition(const TraceSet& traces, const FlowAnalysis& analysis) {
    std::map<FlowPair, int> seen;
    std::size_t case_pairs = 0;
    std::set<std::vector<std::size_t>> time_sets;
    for (const auto& c : analysis.cases) {
        if (!time_sets.insert(c.times).second) {
            throw InvariantViolation("two flow cases share a time-set");
        }
        case_pairs += c.pairs.size();
        for (const auto& p : c.pairs) {
            ++seen[p];
        }
    }
    if (case_pairs != analysis.tuples.size()) {
        throw InvariantViolation("flow cases do not partition the time-of-flow tuples");
    }
    for (const auto& p : analysis.no_flow) {
        ++seen[p];
    }
    std::size_t expected = 0;
    for (const auto& t : traces.traces) {
        for (const auto& sink : traces.signals) {
            if (sink == t.source) {
                continue;
            }
            ++expected;
            auto it = seen.find({t.source, sink});
            if (it == seen.end() || it->second != 1) {
                throw InvariantViolation("pair " + t.source + "->" + sink +
                                         " is not classified exactly once");
            }
        }
    }
    if (seen.size() != expected) {
        throw InvariantViolation("flow records mention untraced pairs");
    }
}

std::string format_flow_case(const FlowCase& c) {
    std::vector<std::string> times;
    for (auto t : c.times) {
        times.push_back(std::to_string(t));
    }
    std::vector<std::string> pairs;
    for (const auto& p : c.pairs) {
        pairs.push_back(p.src + "->" + p.sink);
    }
    return "case " + std::to_string(c.id) + ": times={" + detail::join(times, ",") + "} pairs={" +
           detail::join(pairs, ", ") + "}";
}

namespace {

std::string_view braced(std::string_view& rest, std::string_view key, const std::string& line) {
    auto bad = [&] { return InputError("malformed flow case line '" + line + "'"); };
    rest = detail::trim(rest);
    if (!rest.starts_with(key)) {
        throw bad();
    }
    rest.remove_prefix(key.size());
    if (rest.empty() || rest.front() != '{') {
        throw bad();
    }
    auto close = rest.find('}');
    if (close == std::string_view::npos) {
        throw bad();
    }
    auto body = rest.substr(1, close - 1);
    rest.remove_prefix(close + 1);
    return body;
}

}  // namespace

FlowCase parse_flow_case(const std::string& line) {
    auto bad = [&] { return InputError("malformed flow case line '" + line + "'"); };
    std::string_view rest(line);
    if (!rest.starts_with("case ")) {
        throw bad();
    }
    rest.remove_prefix(5);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
        throw bad();
    }
    auto id = detail::parse_uint(rest.substr(0, colon));
    if (!id) {
        throw bad();
    }
    rest.remove_prefix(colon + 1);
    FlowCase c;
    c.id = *id;
    auto times = braced(rest, "times=", line);
    if (!detail::trim(times).empty()) {
        for (auto t : detail::split(times, ',')) {
            auto v = detail::parse_uint(t);
            if (!v || (!c.times.empty() && *v <= c.times.back())) {
                throw bad();
            }
            c.times.push_back(*v);
        }
    }
    auto pairs = braced(rest, "pairs=", line);
    if (!detail::trim(rest).empty() || c.times.empty()) {
        throw bad();
    }
    for (auto p : detail::split(pairs, ',')) {
        p = detail::trim(p);
        auto arrow = p.find("->");
        if (arrow == std::string_view::npos || arrow == 0 || arrow + 2 == p.size()) {
            throw bad();
        }
        c.pairs.push_back({std::string(p.substr(0, arrow)), std::string(p.substr(arrow + 2))});
    }
    return c;
}

void write_flows(const std::vector<FlowCase>& cases, std::ostream& out) {
    for (const auto& c : cases) {
        out << format_flow_case(c) << '\n';
    }
}

std::vector<FlowCase> read_flows(std::istream& in) {
    std::vector<FlowCase> cases;
    std::string line;
    while (detail::read_line(in, line)) {
        if (detail::trim(line).empty() || line.front() == '#') {
            continue;
        }
        cases.push_back(parse_flow_case(line));
    }
    return cases;
}

void write_no_flow(const std::vector<FlowPair>& pairs, const std::vector<std::string>& untraced,
                   std::ostream& out) {
    for (const auto& s : untraced) {
        out << "# untraced source, flows unknown: " << s << '\n';
    }
    for (const auto& p : pairs) {
        out << p.src << " =/=> " << p.sink << '\n';
    }
}

std::vector<FlowPair> read_no_flow(std::istream& in) {
    std::vector<FlowPair> out;
    std::string line;
    while (detail::read_line(in, line)) {
        auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        auto op = t.find(" =/=> ");
        if (op == std::string_view::npos) {
            throw InputError("malformed no-flow line '" + line + "'");
        }
        out.push_back({std::string(detail::trim(t.substr(0, op))), std::string(detail::trim(t.substr(op + 6)))});
    }
    return out;
}

}  // namespace flowmine
