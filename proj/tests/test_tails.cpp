#include <catch2/catch_amalgamated.hpp>

#include "corpus.hpp"
#include "oracles.hpp"
#include "pigraph/conditions.hpp"
#include "pigraph/tails.hpp"

using namespace pigraph;

TEST_CASE("is_maximal_tail checks the three clauses") {
    auto g5 = corpus::g5_finite();
    CHECK(is_maximal_tail(g5, {"v", "w"}).ok);
    auto only_v = is_maximal_tail(g5, {"v"});
    CHECK_FALSE(only_v.ok);
    CHECK(only_v.violated_clause == 2);

    CHECK(is_maximal_tail(FiniteGraph{{"u"}, {{"e", "u", "u"}, {"f", "u", "u"}}}, {"u"}).ok);
    CHECK_THROWS_AS(is_maximal_tail(g5, {}), EmptySetError);

    // clause 1: {w} misses v although v reaches w
    auto only_w = is_maximal_tail(g5, {"w"});
    CHECK_FALSE(only_w.ok);
    CHECK(only_w.violated_clause == 1);

    // clause 3: two components without a common lower bound
    FiniteGraph split{{"a", "b"}, {{"x", "a", "a"}, {"y", "b", "b"}}};
    auto both = is_maximal_tail(split, {"a", "b"});
    CHECK_FALSE(both.ok);
    CHECK(both.violated_clause == 3);
}

TEST_CASE("enumerate_maximal_tails on the corpus") {
    auto tails5 = enumerate_maximal_tails(corpus::g5_finite());
    REQUIRE(tails5.size() == 1);
    CHECK(tails5[0].members == std::set<VertexId>{"v", "w"});

    auto tails1 = enumerate_maximal_tails(FiniteGraph{{"u"}, {{"e", "u", "u"}, {"f", "u", "u"}}});
    REQUIRE(tails1.size() == 1);
    CHECK(tails1[0].members == std::set<VertexId>{"u"});

    auto tails6 = enumerate_maximal_tails(corpus::g6_finite());
    REQUIRE(tails6.size() == 1);
    CHECK(tails6[0].members == std::set<VertexId>{"v", "w"});
}

TEST_CASE("sinks are allowed in tails") {
    FiniteGraph g{{"a", "b"}, {{"x", "a", "b"}}}; // b is a sink
    auto tails = enumerate_maximal_tails(g);
    REQUIRE(tails.size() == 1);
    CHECK(tails[0].members == std::set<VertexId>{"a", "b"});
    CHECK(is_maximal_tail(g, {"a", "b"}).ok);
}

TEST_CASE("brute force tails and the cap") {
    auto brute = brute_force_tails(corpus::g5_finite());
    REQUIRE(brute.size() == 1);
    CHECK(brute[0] == std::set<VertexId>{"v", "w"});

    auto brute1 = brute_force_tails(FiniteGraph{{"u"}, {{"e", "u", "u"}, {"f", "u", "u"}}});
    REQUIRE(brute1.size() == 1);
    CHECK(brute1[0] == std::set<VertexId>{"u"});

    FiniteGraph big;
    for (int i = 0; i < 13; ++i) big.vertices.push_back("v" + std::to_string(i));
    CHECK_THROWS_AS(brute_force_tails(big), CapExceededError);
}

TEST_CASE("tail loop and exit conditions") {
    auto r5 = tail_report(corpus::g5_finite());
    CHECK(r5.loop_condition);
    CHECK_FALSE(r5.exit_condition);

    auto r1 = tail_report(FiniteGraph{{"u"}, {{"e", "u", "u"}, {"f", "u", "u"}}});
    CHECK(r1.loop_condition);
    CHECK(r1.exit_condition);

    auto r2 = tail_report(FiniteGraph{{"u"}, {{"e", "u", "u"}}});
    CHECK(r2.loop_condition);
    CHECK_FALSE(r2.exit_condition);
}

TEST_CASE("enumeration agrees with subset brute force") {
    std::mt19937 rng(41);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        auto g = oracles::random_no_sink_graph(rng, 7);
        auto enumerated = enumerate_maximal_tails(g);
        std::set<std::set<VertexId>> via_ty;
        for (const auto& tail : enumerated) {
            via_ty.insert(tail.members);
            auto check = is_maximal_tail(g, tail.members);
            CHECK(check.ok);
        }
        auto brute = brute_force_tails(g);
        std::set<std::set<VertexId>> via_subsets(brute.begin(), brute.end());
        CHECK(via_ty == via_subsets);
        ++checked;
    }
    CHECK(checked == 500);
}

TEST_CASE("tail criterion matches condition (DL) under (K)") {
    std::mt19937 rng(43);
    std::vector<FiniteGraph> graphs{corpus::g5_finite(), corpus::g6_finite(),
                                    FiniteGraph{{"u"}, {{"e", "u", "u"}, {"f", "u", "u"}}},
                                    FiniteGraph{{"u"}, {{"e", "u", "u"}}}};
    for (int i = 0; i < 300; ++i) graphs.push_back(oracles::random_no_sink_graph(rng));
    for (const auto& g : graphs) {
        GraphHandle h{g};
        auto cls = classify_vertices(h);
        bool K = condition_K(h, cls).first;
        bool DL = condition_DL(h, cls).first;
        CHECK((K && tail_loop_condition(g)) == (K && DL));
    }
}
