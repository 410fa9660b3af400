#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "support.hpp"

using namespace flowmine;

namespace {

bool has(const std::vector<Condition>& cs, const Predicate& p, RowPos row) {
    return std::find(cs.begin(), cs.end(), Condition{p, row}) != cs.end();
}

struct GatedRun {
    TraceSet traces;
    FlowCase a_to_b;
};

GatedRun gated() {
    GatedRun g;
    g.traces = gen_all_traces(fixture_design("gated"), fixture_testbench("gated"), {"a"});
    auto cases = analyze_flows(g.traces).cases;
    REQUIRE(cases.size() == 1);
    g.a_to_b = cases[0];
    return g;
}

Slice make_slice(std::vector<std::uint64_t> prior, std::vector<std::uint64_t> flow) {
    return {"s", 1, std::move(prior), std::move(flow)};
}

}  // namespace

TEST_CASE("candidates for the gated fixture") {
    auto g = gated();
    SignalTable table(g.traces.signals, g.traces.widths);
    auto slices = case_slices(g.a_to_b, g.traces);
    CHECK(slices.size() == 4);
    auto cands = candidate_predicates(table, slices);
    CHECK(has(cands, Predicate::membership("en", {1}), RowPos::Prior));
    CHECK(has(cands, Predicate::membership("clk", {0, 1}), RowPos::Prior));
    CHECK(std::is_sorted(cands.begin(), cands.end()));
}

TEST_CASE("membership is abandoned past three values") {
    SignalTable table({"d", "x", "y", "z"}, {2, 2, 2, 1});
    std::vector<Slice> slices{make_slice({0, 0, 0, 0}, {0, 0, 0, 0}), make_slice({1, 0, 0, 0}, {1, 0, 0, 0}),
                              make_slice({2, 0, 0, 0}, {2, 0, 0, 0}), make_slice({3, 0, 0, 0}, {3, 0, 0, 0})};
    auto cands = candidate_predicates(table, slices);
    for (const auto& c : cands) {
        bool membership_of_d = c.pred.kind == PredicateKind::Membership && c.pred.lhs == "d";
        CHECK_FALSE(membership_of_d);
    }
    CHECK(has(cands, Predicate::eq_sig("x", "y"), RowPos::Flow));
    CHECK(has(cands, Predicate::neq_sig("x", "y"), RowPos::Prior));
    CHECK_FALSE(has(cands, Predicate::eq_sig("x", "z"), RowPos::Flow));
    CHECK(candidate_predicates(table, {}).empty());
}

TEST_CASE("check_predicate on slices") {
    SignalTable table({"r", "x", "y"}, {3, 2, 2});
    auto s = make_slice({5, 2, 3}, {5, 2, 3});
    CHECK(check_predicate({Predicate::membership("r", {5}), RowPos::Flow}, s, table));
    CHECK(check_predicate({Predicate::prev_eq("r"), RowPos::Both}, s, table));
    CHECK_FALSE(check_predicate({Predicate::prev_eq("r"), RowPos::Both}, make_slice({5, 2, 3}, {4, 2, 3}), table));
    CHECK_FALSE(check_predicate({Predicate::eq_sig("x", "y"), RowPos::Prior}, s, table));
}

TEST_CASE("gated fixture conditions") {
    auto g = gated();
    SignalTable table(g.traces.signals, g.traces.widths);
    auto cs = mine_conditions(g.a_to_b, case_slices(g.a_to_b, g.traces), table);
    CHECK_FALSE(cs.unconditioned);
    CHECK(has(cs.conditions, Predicate::membership("en", {1}), RowPos::Prior));
    CHECK(has(cs.conditions, Predicate::membership("rstn", {1}), RowPos::Prior));
    CHECK(has(cs.conditions, Predicate::neq_const("en"), RowPos::Prior));
    // clk alternates across the flow slices, so the trivial membership survives mining
    CHECK(has(cs.conditions, Predicate::membership("clk", {0, 1}), RowPos::Prior));
    CHECK(std::is_sorted(cs.conditions.begin(), cs.conditions.end()));
}

TEST_CASE("a candidate failing on one slice is dropped") {
    SignalTable table({"a", "b"}, {1, 1});
    FlowCase fc{0, {1, 2}, {{"a", "b"}}};
    std::vector<Slice> slices{make_slice({1, 0}, {1, 1}), make_slice({1, 1}, {0, 1})};
    auto cs = mine_conditions(fc, slices, table);
    CHECK(has(cs.conditions, Predicate::membership("a", {1}), RowPos::Prior));
    CHECK_FALSE(has(cs.conditions, Predicate::prev_eq("a"), RowPos::Both));
    CHECK(has(cs.conditions, Predicate::prev_eq("b"), RowPos::Both) == false);
}

TEST_CASE("time-0-only cases are unconditioned") {
    SignalTable table({"a", "w"}, {1, 1});
    FlowCase fc{0, {0}, {{"a", "w"}}};
    auto cs = mine_conditions(fc, {}, table);
    CHECK(cs.unconditioned);
    CHECK(cs.conditions.empty());
}

TEST_CASE("trace-set invariants") {
    auto d = load_design("design d\ninput clk : 1\ninput v : 3\nwire z : 1\nassign z = 0\n"
                         "reg q : 3 = 0\nalways q <= v\n");
    std::string csv = "cycle,clk,v\n";
    for (int i = 0; i < 10; ++i) {
        csv += std::to_string(i) + "," + std::to_string(i % 2) + "," + std::to_string(i % 5) + "\n";
    }
    auto inv = mine_trace_invariants(gen_all_traces(d, testbench_from(csv)));
    auto in = [&](const Predicate& p) { return std::find(inv.begin(), inv.end(), p) != inv.end(); };
    CHECK(in(Predicate::membership("clk", {0, 1})));
    CHECK(in(Predicate::membership("z", {0})));
    CHECK(in(Predicate::eq_const("z")));
    CHECK(in(Predicate::prev_eq("z")));
    for (const auto& p : inv) {
        bool membership_of_v = p.kind == PredicateKind::Membership && p.lhs == "v";
        CHECK_FALSE(membership_of_v);
    }
    CHECK_FALSE(in(Predicate::prev_eq("clk")));
    CHECK(std::is_sorted(inv.begin(), inv.end()));
}

TEST_CASE("conditions file round trip") {
    FlowCase fc{3, {2, 5}, {{"a", "b"}}};
    ConditionSet cs{3,
                    {{Predicate::membership("en", {1}), RowPos::Prior},
                     {Predicate::eq_sig("x", "y"), RowPos::Flow},
                     {Predicate::prev_eq("q"), RowPos::Both}},
                    false};
    FlowCase zero{4, {0}, {{"a", "w"}}};
    ConditionSet none{4, {}, true};
    std::vector<MinedCase> mined{{fc, cs}, {zero, none}};
    std::ostringstream out;
    write_conditions(mined, out);
    CHECK(out.str() ==
          "case 3: times={2,5} pairs={a->b}\n"
          "case 3: prior en in {1}\n"
          "case 3: flow x == y\n"
          "case 3: both q == prev(q)\n"
          "case 4: times={0} pairs={a->w}\n");
    std::istringstream in(out.str());
    CHECK(read_conditions(in) == mined);

    auto bad = [](const std::string& text) {
        std::istringstream s(text);
        return read_conditions(s);
    };
    CHECK_THROWS_AS(bad("case 1: prior a in {1}\n"), ParseError);
    CHECK_THROWS_AS(bad("case 1: times={1} pairs={a->b}\ncase 1: sideways a in {1}\n"), ParseError);
    CHECK_THROWS_AS(bad("case 1: times={1} pairs={a->b}\ncase 1: prior a == prev(a)\n"), ParseError);
    CHECK_THROWS_AS(bad("case 1: times={1} pairs={a->b}\ncase 1: times={1} pairs={a->b}\n"), ParseError);
}

TEST_CASE("miner is sound and maximal against brute force") {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 150; ++k) {
        auto r = oracle::random_design(rng);
        auto set = gen_all_traces(r.design, r.testbench);
        SignalTable table(set.signals, set.widths);
        auto cases = analyze_flows(set).cases;
        for (const auto& fc : cases) {
            auto slices = case_slices(fc, set);
            auto cs = mine_conditions(fc, slices, table);
            for (const auto& c : cs.conditions) {
                for (const auto& s : slices) {
                    CHECK(check_predicate(c, s, table));
                }
            }
            std::set<Condition> emitted(cs.conditions.begin(), cs.conditions.end());
            for (const auto& t : oracle::brute_force_true_instances(set.signals, set.widths, slices)) {
                if (emitted.contains(t)) {
                    continue;
                }
                // only looser memberships may be left out
                REQUIRE(t.pred.kind == PredicateKind::Membership);
                bool tighter = std::any_of(emitted.begin(), emitted.end(), [&](const Condition& e) {
                    return e.row == t.row && e.pred.kind == PredicateKind::Membership && e.pred.lhs == t.pred.lhs &&
                           std::includes(t.pred.values.begin(), t.pred.values.end(), e.pred.values.begin(),
                                         e.pred.values.end());
                });
                CHECK(tighter);
            }
        }
    }
}
