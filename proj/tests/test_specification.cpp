#include <random>
#include <set>

#include "doctest.h"
#include "support.hpp"

using namespace flowmine;

namespace {

Condition prior(Predicate p) { return {std::move(p), RowPos::Prior}; }
Condition flow(Predicate p) { return {std::move(p), RowPos::Flow}; }

MinedCase mined(std::size_t id, std::vector<std::size_t> times, std::vector<FlowPair> pairs,
                std::vector<Condition> conditions) {
    std::sort(conditions.begin(), conditions.end());
    return {FlowCase{id, std::move(times), std::move(pairs)}, ConditionSet{id, std::move(conditions), false}};
}

std::string emit(const std::vector<Property>& ps, const std::vector<FlowPair>& nf = {}) {
    std::ostringstream out;
    emit_specification(ps, nf, out);
    return out.str();
}

Specification read_text(const std::string& text) {
    std::istringstream in(text);
    return read_specification(in);
}

Property property(std::size_t n, std::vector<std::string> src, std::vector<std::string> snk,
                  std::vector<Condition> cs = {}) {
    Property p;
    p.number = n;
    p.case_ids = {n};
    p.sources = std::move(src);
    p.sinks = std::move(snk);
    std::sort(cs.begin(), cs.end());
    p.conditions = std::move(cs);
    return p;
}

}  // namespace

TEST_CASE("trace-set invariants are eliminated") {
    SignalTable table({"clk", "en"}, {1, 1});
    ConditionSet cs{0, {prior(Predicate::membership("clk", {0, 1})), prior(Predicate::membership("en", {1}))}, false};
    auto out = eliminate_trace_invariants(cs, {Predicate::membership("clk", {0, 1})}, table);
    CHECK(out.conditions == std::vector<Condition>{prior(Predicate::membership("en", {1}))});

    CHECK(eliminate_trace_invariants(cs, {Predicate::eq_const("zz")}, table) == cs);
    auto all = eliminate_trace_invariants(
        cs, {Predicate::membership("clk", {0, 1}), Predicate::membership("en", {1})}, table);
    CHECK(all.conditions.empty());
    CHECK(emit({property(0, {"a"}, {"b"}, all.conditions)}) == "case 0: 0\n\t_src_ in {a}\n\t=/=>\n\t_snk_ in {b}\n\n");
}

TEST_CASE("constant-form normalization") {
    SignalTable table({"en", "r", "s", "x"}, {1, 2, 2, 2});
    auto n = [&](std::vector<Condition> cs) {
        std::sort(cs.begin(), cs.end());
        return normalize_conditions(cs, table);
    };
    CHECK(n({flow(Predicate::membership("r", {0})), flow(Predicate::eq_const("r"))}) ==
          std::vector<Condition>{flow(Predicate::eq_const("r"))});
    CHECK(n({prior(Predicate::membership("en", {1})), prior(Predicate::neq_const("en"))}) ==
          std::vector<Condition>{prior(Predicate::neq_const("en"))});
    CHECK(n({flow(Predicate::membership("r", {1, 3})), flow(Predicate::neq_const("r"))}) ==
          std::vector<Condition>{flow(Predicate::membership("r", {1, 3}))});
    // forms on different rows do not interact
    auto rows = n({prior(Predicate::membership("r", {0})), flow(Predicate::eq_const("r"))});
    CHECK(rows.size() == 2);
    // a 2-bit singleton other than 0 is kept next to r != 0 only as the membership
    CHECK(n({flow(Predicate::membership("r", {2})), flow(Predicate::neq_const("r"))}) ==
          std::vector<Condition>{flow(Predicate::membership("r", {2}))});
}

TEST_CASE("comparisons between pinned signals are pruned") {
    SignalTable table({"en", "r", "s", "x"}, {1, 2, 2, 2});
    std::vector<Condition> cs{prior(Predicate::neq_const("en")),   prior(Predicate::eq_const("r")),
                              prior(Predicate::neq_sig("en", "r")), flow(Predicate::neq_sig("en", "r")),
                              flow(Predicate::eq_sig("s", "x")),    flow(Predicate::eq_const("en")),
                              {Predicate::prev_eq("r"), RowPos::Both}, flow(Predicate::membership("r", {0}))};
    std::sort(cs.begin(), cs.end());
    auto out = normalize_conditions(cs, table);
    std::set<Condition> kept(out.begin(), out.end());
    CHECK_FALSE(kept.contains(prior(Predicate::neq_sig("en", "r"))));
    CHECK(kept.contains(flow(Predicate::neq_sig("en", "r"))) == false);
    CHECK(kept.contains(flow(Predicate::eq_sig("s", "x"))));
    CHECK_FALSE(kept.contains({Predicate::prev_eq("r"), RowPos::Both}));
    CHECK(kept.contains(prior(Predicate::neq_const("en"))));
    // r is pinned on the flow row only through the membership
    CHECK(kept.contains(flow(Predicate::membership("r", {0}))));

    std::vector<Condition> loose{flow(Predicate::membership("r", {1, 2})), flow(Predicate::eq_const("s")),
                                 flow(Predicate::neq_sig("r", "s"))};
    std::sort(loose.begin(), loose.end());
    CHECK(normalize_conditions(loose, table) == loose);
}

TEST_CASE("merging cases") {
    std::vector<Condition> c{prior(Predicate::neq_const("en"))};
    auto one = merge_properties({mined(0, {2}, {{"a", "b"}, {"a", "c"}}, c)});
    REQUIRE(one.size() == 1);
    CHECK(one[0].sources == std::vector<std::string>{"a"});
    CHECK(one[0].sinks == std::vector<std::string>{"b", "c"});
    CHECK(one[0].conditions == c);

    std::vector<Condition> d{flow(Predicate::eq_const("x"))};
    CHECK(merge_properties({mined(0, {2}, {{"a", "b"}}, c), mined(1, {2}, {{"d", "e"}}, d)}).size() == 2);

    // identical conditions but different times stay apart
    CHECK(merge_properties({mined(0, {2}, {{"a", "b"}}, c), mined(1, {3}, {{"d", "e"}}, c)}).size() == 2);

    auto many = merge_properties({mined(3, {1, 4}, {{"s2", "z"}}, c), mined(1, {2}, {{"q", "r"}}, d),
                                  mined(0, {1, 4}, {{"s1", "z"}, {"s3", "z"}}, c)});
    REQUIRE(many.size() == 2);
    CHECK(many[0].number == 0);
    CHECK(many[0].case_ids == std::vector<std::size_t>{0, 3});
    CHECK(many[0].sources == std::vector<std::string>{"s1", "s2", "s3"});
    CHECK(many[0].sinks == std::vector<std::string>{"z"});
    CHECK(many[1].number == 1);
    CHECK(many[1].case_ids == std::vector<std::size_t>{1});
}

TEST_CASE("emission layout") {
    auto p = property(0, {"instr_lw"}, {"mem_do_rinst", "mem_wordsize"},
                      {prior(Predicate::eq_const("x")), prior(Predicate::neq_const("en")),
                       prior(Predicate::neq_const("cpu_state")), flow(Predicate::eq_const("x")),
                       flow(Predicate::neq_const("y")), flow(Predicate::membership("r", {1, 2})),
                       prior(Predicate::membership("q", {3})), flow(Predicate::eq_sig("a", "b")),
                       prior(Predicate::neq_sig("a", "b")), {Predicate::prev_eq("z"), RowPos::Both}});
    p.case_ids = {4, 9};
    CHECK(emit({p}, {{"a", "b"}, {"b", "a"}}) ==
          "case 0: 4_9\n"
          "\t_src_ in {instr_lw}\n"
          "\t=/=>\n"
          "\t_snk_ in {mem_do_rinst, mem_wordsize}\n"
          "\tunless\n"
          "0 == _inv_ in {x}\n"
          "0 != _inv_ in {cpu_state, en}\n"
          "0 == _r_ in {x}\n"
          "0 != _r_ in {y}\n"
          "prev(q) in {3}\n"
          "r in {1, 2}\n"
          "a == b\n"
          "prev(a) != prev(b)\n"
          "z == prev(z)\n"
          "\n"
          "a =/=> b\n"
          "b =/=> a\n");
    CHECK(emit({}, {{"a", "b"}}) == "a =/=> b\n");
}

TEST_CASE("specification reader round trip") {
    auto p0 = property(0, {"a", "c"}, {"b"},
                       {prior(Predicate::neq_const("en")), prior(Predicate::eq_sig("x", "y")),
                        flow(Predicate::membership("x", {0, 3})), {Predicate::prev_eq("q"), RowPos::Both}});
    auto p1 = property(1, {"d"}, {"e", "f"});
    p1.case_ids = {1, 2, 5};
    Specification spec{{p0, p1}, {{"a", "d"}, {"e", "a"}}};
    auto text = emit(spec.properties, spec.no_flow);
    CHECK(read_text(text) == spec);

    auto golden = slurp(test_dir() / "golden" / "multi.spec.txt");
    CHECK(emit(read_text(golden).properties, read_text(golden).no_flow) == golden);

    CHECK_THROWS_AS(read_text("case 0: 0\n\t_src_ in {a}\n\t=/=>\n\t_snk_ in {b}\n\tunless\n\n"), ParseError);
    CHECK_THROWS_AS(read_text("case 0: 0\n\t_src_ in {a}\n\t_snk_ in {b}\n\n"), ParseError);
    CHECK_THROWS_AS(read_text("a =/=> b\ncase 0: 0\n\t_src_ in {a}\n\t=/=>\n\t_snk_ in {b}\n\n"), ParseError);
    CHECK_THROWS_AS(read_text("case 0: 0\n\t_src_ in {a}\n\t=/=>\n\t_snk_ in {b}\n\tunless\nprev(a) == b\n\n"),
                    ParseError);
}

TEST_CASE("emission is injective on random property lists") {
    std::mt19937_64 rng(77);
    std::vector<std::string> names{"a", "b", "c", "d"};
    auto pick = [&](std::size_t n) {
        std::set<std::string> s;
        while (s.size() < n) {
            s.insert(names[rng() % names.size()]);
        }
        return std::vector<std::string>(s.begin(), s.end());
    };
    std::map<std::string, Specification> seen;
    for (int k = 0; k < 400; ++k) {
        Specification spec;
        auto count = rng() % 3;
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<Condition> cs;
            if (rng() % 2) {
                cs.push_back(prior(Predicate::neq_const(names[rng() % 4])));
            }
            if (rng() % 2) {
                cs.push_back(flow(Predicate::membership(names[rng() % 4], {rng() % 3})));
            }
            auto p = property(i, pick(1 + rng() % 2), pick(1 + rng() % 2), cs);
            spec.properties.push_back(p);
        }
        if (rng() % 2) {
            spec.no_flow.push_back({"a", names[1 + rng() % 3]});
        }
        auto text = emit(spec.properties, spec.no_flow);
        auto [it, fresh] = seen.emplace(text, spec);
        if (!fresh) {
            CHECK(it->second == spec);
        }
        CHECK(read_text(text) == spec);
    }
}

TEST_CASE("group heatmap counts") {
    GroupAssignment g;
    g.group_of = {{"a", "G1"}, {"b", "G2"}, {"c", "G2"}, {"d", "G3"}};
    g.order = {"G1", "G2", "G3"};

    auto h = group_heatmap({property(0, {"a"}, {"b", "c"})}, g);
    CHECK(h.groups == std::vector<std::string>{"G1", "G2", "G3"});
    CHECK(h.counts == std::vector<std::vector<std::size_t>>{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}});

    auto spans = group_heatmap({property(0, {"a"}, {"b", "d"})}, g);
    CHECK(spans.counts == std::vector<std::vector<std::size_t>>{{0, 1, 1}, {0, 0, 0}, {0, 0, 0}});

    auto other = group_heatmap({property(0, {"zz"}, {"a"})}, g);
    CHECK(other.groups.back() == "other");
    CHECK(other.counts[3][0] == 1);

    std::ostringstream out;
    write_heatmap_csv(h, out);
    CHECK(out.str() == "source\\sink,G1,G2,G3\nG1,0,1,0\nG2,0,0,0\nG3,0,0,0\n");
}

TEST_CASE("heatmap totals match a per-property recount") {
    std::mt19937_64 rng(13);
    std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
    GroupAssignment g;
    g.group_of = {{"a", "X"}, {"b", "X"}, {"c", "Y"}, {"d", "Z"}, {"e", "Z"}};
    g.order = {"X", "Y", "Z"};
    auto group_of = [&](const std::string& s) {
        auto it = g.group_of.find(s);
        return it == g.group_of.end() ? std::string("other") : it->second;
    };
    for (int k = 0; k < 100; ++k) {
        std::vector<Property> ps;
        auto count = rng() % 6;
        for (std::size_t i = 0; i < count; ++i) {
            std::set<std::string> src, snk;
            for (int j = 0; j < 3; ++j) {
                src.insert(names[rng() % names.size()]);
                snk.insert(names[rng() % names.size()]);
            }
            ps.push_back(property(i, {src.begin(), src.end()}, {snk.begin(), snk.end()}));
        }
        auto h = group_heatmap(ps, g);
        for (std::size_t a = 0; a < h.groups.size(); ++a) {
            std::size_t row_total = 0, col_total = 0, row_expect = 0, col_expect = 0;
            for (std::size_t b = 0; b < h.groups.size(); ++b) {
                row_total += h.counts[a][b];
                col_total += h.counts[b][a];
            }
            for (const auto& p : ps) {
                std::set<std::string> sg, kg;
                for (const auto& s : p.sources) {
                    sg.insert(group_of(s));
                }
                for (const auto& s : p.sinks) {
                    kg.insert(group_of(s));
                }
                if (sg.contains(h.groups[a])) {
                    row_expect += kg.size();
                }
                if (kg.contains(h.groups[a])) {
                    col_expect += sg.size();
                }
            }
            CHECK(row_total == row_expect);
            CHECK(col_total == col_expect);
        }
    }
}

TEST_CASE("group files") {
    std::istringstream in("signal,group\n# control\nen,ctl\nrstn , ctl\na,data\n");
    auto g = read_groups(in);
    CHECK(g.order == std::vector<std::string>{"ctl", "data"});
    CHECK(g.group_of.at("rstn") == "ctl");
    std::istringstream clash("a,x\na,y\n");
    CHECK_THROWS_AS(read_groups(clash), ParseError);
    std::istringstream bad("a;x\n");
    CHECK_THROWS_AS(read_groups(bad), ParseError);
}
