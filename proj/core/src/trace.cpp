#include "flowmine/trace.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "text_util.hpp"

namespace flowmine {

std::size_t Trace::index_of(std::string_view signal) const {
    auto it = std::find(signals.begin(), signals.end(), signal);
    if (it == signals.end()) {
        throw InputError("trace has no signal '" + std::string(signal) + "'");
    }
    return static_cast<std::size_t>(it - signals.begin());
}

const Trace* TraceSet::find(std::string_view source) const {
    for (const auto& t : traces) {
        if (t.source == source) {
            return &t;
        }
    }
    return nullptr;
}

std::vector<std::string> TraceSet::sources() const {
    std::vector<std::string> out;
    for (const auto& t : traces) {
        out.push_back(t.source);
    }
    return out;
}

void canonicalize(TraceSet& set) {
    if (set.traces.empty()) {
        return;
    }
    if (set.signals.empty()) {
        set.signals = set.traces.front().signals;
    }
    if (set.widths.empty()) {
        set.widths.assign(set.signals.size(), 0);
    }
    if (set.widths.size() != set.signals.size()) {
        throw InputError("signal manifest does not match trace columns");
    }
    const std::size_t length = set.traces.front().length();
    std::unordered_map<std::string_view, std::size_t> position;
    for (std::size_t i = 0; i < set.signals.size(); ++i) {
        position.emplace(set.signals[i], i);
    }
    for (const auto& t : set.traces) {
        if (t.signals != set.signals) {
            throw InputError("trace for source '" + t.source + "' has a different signal order");
        }
        if (t.length() != length) {
            throw InputError("trace for source '" + t.source +
                             "' has a different length; traces must share one testbench");
        }
        if (!position.contains(t.source)) {
            throw InputError("trace source '" + t.source + "' is not one of its signals");
        }
    }
    std::sort(set.traces.begin(), set.traces.end(), [&](const Trace& a, const Trace& b) {
        return position.at(a.source) < position.at(b.source);
    });
    for (std::size_t k = 1; k < set.traces.size(); ++k) {
        if (set.traces[k].source == set.traces[k - 1].source) {
            throw InputError("duplicate trace for source '" + set.traces[k].source + "'");
        }
    }
}

void write_trace(const Trace& trace, std::ostream& out) {
    out << "#source," << trace.source << '\n';
    out << "cycle";
    for (const auto& s : trace.signals) {
        out << ',' << s << ',' << s << ".t";
    }
    out << '\n';
    std::string row;
    for (std::size_t i = 0; i < trace.states.size(); ++i) {
        row = std::to_string(i);
        const auto& st = trace.states[i];
        for (std::size_t k = 0; k < trace.signals.size(); ++k) {
            row += ',';
            row += std::to_string(st.values[k]);
            row += ',';
            row += st.taints[k] ? '1' : '0';
        }
        row += '\n';
        out << row;
    }
}

Trace read_trace(std::istream& in) {
    Trace t;
    std::string line;
    if (!detail::read_line(in, line)) {
        throw ParseError("empty trace file", 1);
    }
    auto first = detail::split(line, ',');
    if (first.size() != 2 || first[0] != "#source" || detail::trim(first[1]).empty()) {
        throw ParseError("malformed header: expected '#source,<name>'", 1);
    }
    t.source = std::string(detail::trim(first[1]));

    if (!detail::read_line(in, line)) {
        throw ParseError("malformed header: missing column header", 2);
    }
    auto header = detail::split(line, ',');
    if (header[0] != "cycle" || header.size() % 2 != 1) {
        throw ParseError("malformed header: expected 'cycle,<sig>,<sig>.t,...'", 2);
    }
    for (std::size_t k = 1; k < header.size(); k += 2) {
        std::string name(header[k]);
        if (name.empty() || header[k + 1] != name + ".t") {
            throw ParseError("malformed header: column " + std::to_string(k + 2) + " should be '" +
                                 name + ".t'",
                             2, k + 2);
        }
        if (std::find(t.signals.begin(), t.signals.end(), name) != t.signals.end()) {
            throw ParseError("malformed header: duplicate signal '" + name + "'", 2, k + 1);
        }
        t.signals.push_back(std::move(name));
    }
    if (std::find(t.signals.begin(), t.signals.end(), t.source) == t.signals.end()) {
        throw ParseError("source '" + t.source + "' is not a trace column", 1);
    }

    const std::size_t n = t.signals.size();
    std::size_t line_no = 2;
    while (detail::read_line(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto cells = detail::split(line, ',');
        if (cells.size() != header.size()) {
            throw ParseError("row has " + std::to_string(cells.size()) + " columns, header has " +
                                 std::to_string(header.size()),
                             line_no);
        }
        auto cycle = detail::parse_uint(cells[0]);
        if (!cycle || *cycle != t.states.size()) {
            throw ParseError("cycle column must count up from 0 without gaps", line_no, 1);
        }
        State st;
        st.values.resize(n);
        st.taints.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            auto v = detail::parse_uint(cells[1 + 2 * k]);
            if (!v) {
                throw ParseError("malformed value for '" + t.signals[k] + "'", line_no, 2 + 2 * k);
            }
            auto taint = cells[2 + 2 * k];
            if (taint != "0" && taint != "1") {
                throw ParseError("tracking bit for '" + t.signals[k] + "' must be 0 or 1", line_no,
                                 3 + 2 * k);
            }
            st.values[k] = *v;
            st.taints[k] = taint == "1";
        }
        t.states.push_back(std::move(st));
    }
    return t;
}

void write_trace_file(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path.string() + "'");
    }
    write_trace(trace, out);
    if (!out) {
        throw InputError("write failed for '" + path.string() + "'");
    }
}

Trace read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open trace '" + path.string() + "'");
    }
    try {
        return read_trace(in);
    } catch (const ParseError& e) {
        throw InputError(path.filename().string() + ": " + e.what());
    }
}

void write_trace_set(const TraceSet& set, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& t : set.traces) {
        write_trace_file(t, dir / (t.source + std::string(kTraceSuffix)));
    }
    std::ofstream out(dir / kManifestName, std::ios::binary);
    out << "signal,width\n";
    for (std::size_t i = 0; i < set.signals.size(); ++i) {
        out << set.signals[i] << ',' << (i < set.widths.size() ? set.widths[i] : 0) << '\n';
    }
    if (!out) {
        throw InputError("cannot write signal manifest in '" + dir.string() + "'");
    }
}

namespace {

void read_manifest(const std::filesystem::path& path, TraceSet& set) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "'");
    }
    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line == "signal,width")) {
            continue;
        }
        auto cells = detail::split(line, ',');
        auto w = cells.size() == 2 ? detail::parse_uint(cells[1]) : std::nullopt;
        if (!w || *w > 64) {
            throw InputError(path.filename().string() + ": line " + std::to_string(line_no) +
                             ": expected 'signal,width'");
        }
        set.signals.emplace_back(cells[0]);
        set.widths.push_back(static_cast<unsigned>(*w));
    }
}

}  // namespace

TraceSet read_trace_set(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw InputError("trace directory '" + dir.string() + "' does not exist");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > kTraceSuffix.size() &&
            name.ends_with(kTraceSuffix)) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw InputError("no *" + std::string(kTraceSuffix) + " files in '" + dir.string() + "'");
    }
    TraceSet set;
    if (auto manifest = dir / kManifestName; std::filesystem::exists(manifest)) {
        read_manifest(manifest, set);
    }
    for (const auto& f : files) {
        set.traces.push_back(read_trace_file(f));
    }
    canonicalize(set);
    return set;
}

std::vector<Slice> slice(const Trace& trace, const std::set<std::size_t>& times) {
    std::vector<Slice> out;
    out.reserve(times.size());
    for (auto t : times) {
        if (t == 0 || t >= trace.length()) {
            throw InputError("cannot slice trace '" + trace.source + "' at time " + std::to_string(t));
        }
        out.push_back({trace.source, t, trace.states[t - 1].values, trace.states[t].values});
    }
    return out;
}

}  // namespace flowmine
