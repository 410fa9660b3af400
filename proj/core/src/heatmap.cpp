#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "flowmine/specification.hpp"
#include "text_util.hpp"

namespace flowmine {

GroupAssignment read_groups(std::istream& in) {
    GroupAssignment g;
    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line)) {
        ++line_no;
        auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        auto cols = detail::split(t, ',');
        if (cols.size() != 2) {
            throw ParseError("expected 'signal,group'", line_no);
        }
        auto signal = std::string(detail::trim(cols[0]));
        auto group = std::string(detail::trim(cols[1]));
        if (line_no == 1 && signal == "signal" && group == "group") {
            continue;
        }
        if (signal.empty() || group.empty()) {
            throw ParseError("empty signal or group name", line_no);
        }
        auto [it, fresh] = g.group_of.emplace(signal, group);
        if (!fresh && it->second != group) {
            throw ParseError("signal '" + signal + "' assigned to two groups", line_no);
        }
        if (std::find(g.order.begin(), g.order.end(), group) == g.order.end()) {
            g.order.push_back(group);
        }
    }
    return g;
}

Heatmap group_heatmap(const std::vector<Property>& properties, const GroupAssignment& groups) {
    Heatmap h;
    h.groups = groups.order;
    auto slot = [&](const std::string& signal) {
        auto it = groups.group_of.find(signal);
        const std::string& g = it == groups.group_of.end() ? std::string(kDefaultGroup) : it->second;
        auto pos = std::find(h.groups.begin(), h.groups.end(), g);
        if (pos == h.groups.end()) {
            h.groups.push_back(g);
            return h.groups.size() - 1;
        }
        return static_cast<std::size_t>(pos - h.groups.begin());
    };

    std::vector<std::pair<std::set<std::size_t>, std::set<std::size_t>>> touched;
    for (const auto& p : properties) {
        std::set<std::size_t> src, snk;
        for (const auto& s : p.sources) {
            src.insert(slot(s));
        }
        for (const auto& s : p.sinks) {
            snk.insert(slot(s));
        }
        touched.emplace_back(std::move(src), std::move(snk));
    }
    h.counts.assign(h.groups.size(), std::vector<std::size_t>(h.groups.size(), 0));
    for (const auto& [src, snk] : touched) {
        for (auto a : src) {
            for (auto b : snk) {
                ++h.counts[a][b];
            }
        }
    }
    return h;
}

void write_heatmap_csv(const Heatmap& heatmap, std::ostream& out) {
    out << "source\\sink";
    for (const auto& g : heatmap.groups) {
        out << ',' << g;
    }
    out << '\n';
    for (std::size_t a = 0; a < heatmap.groups.size(); ++a) {
        out << heatmap.groups[a];
        for (auto c : heatmap.counts[a]) {
            out << ',' << c;
        }
        out << '\n';
    }
}

}  // namespace flowmine
