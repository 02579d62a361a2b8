#include <catch2/catch_amalgamated.hpp>

#include "corpus.hpp"
#include "oracles.hpp"
#include "pigraph/graph.hpp"

using namespace pigraph;

TEST_CASE("validate accepts the corpus") {
    CHECK(validate(corpus::g1()).ok());
    CHECK(validate(corpus::g2()).ok());
    CHECK(validate(corpus::g3()).ok());
    CHECK(validate(corpus::g4()).ok());
    CHECK(validate(corpus::g5()).ok());
}

TEST_CASE("validate reports dangling edges") {
    FiniteGraph g{{"v"}, {{"a", "v", "nowhere"}}};
    auto result = validate(GraphHandle{g});
    REQUIRE_FALSE(result.ok());
    CHECK(result.errors.front().kind == ValidationKind::DanglingEdge);
}

TEST_CASE("validate reports duplicate ids") {
    FiniteGraph g{{"v", "v"}, {}};
    auto result = validate(GraphHandle{g});
    REQUIRE_FALSE(result.ok());
    CHECK(result.errors.front().kind == ValidationKind::DuplicateId);
}

TEST_CASE("validate reports backward links") {
    // a period link pointing at a stem vertex would run against the copy order
    PeriodicGraph p;
    p.stem = FiniteGraph{{"s"}, {{"a", "s", "s"}}};
    p.pattern = FiniteGraph{{"c"}, {}};
    p.period_links = {{"x", "c", "s"}};
    auto result = validate(GraphHandle{p});
    REQUIRE_FALSE(result.ok());
    CHECK(result.errors.front().kind == ValidationKind::BackwardLink);

    PeriodicGraph q = corpus::g4_periodic();
    q.stem_links.push_back({"z", "c", "v"}); // pattern -> stem
    auto rq = validate(GraphHandle{q});
    REQUIRE_FALSE(rq.ok());
    CHECK(rq.errors.front().kind == ValidationKind::BackwardLink);
}

TEST_CASE("validate_no_sinks") {
    CHECK(validate_no_sinks(corpus::g1()).empty());
    CHECK(validate_no_sinks(corpus::g4()).empty());
    FiniteGraph lone{{"s"}, {}};
    auto sinks = validate_no_sinks(GraphHandle{lone});
    REQUIRE(sinks.size() == 1);
    CHECK(sinks.front() == VertexRef::stem("s"));
}

TEST_CASE("add_tails hangs an infinite tail off every sink") {
    FiniteGraph lone{{"s"}, {}};
    auto result = add_tails(lone);
    CHECK(result.had_sinks);
    CHECK(result.graph.pattern.vertices.size() == 1);
    CHECK(result.graph.stem_links.size() == 1);
    CHECK(result.graph.period_links.size() == 1);
    CHECK(validate(GraphHandle{result.graph}).ok());
    CHECK(validate_no_sinks(GraphHandle{result.graph}).empty());

    FiniteGraph two{{"a", "b", "c"}, {{"x", "a", "b"}, {"y", "a", "c"}}};
    auto r2 = add_tails(two);
    CHECK(r2.sinks == std::vector<VertexId>{"b", "c"});
    CHECK(r2.graph.pattern.vertices.size() == 2);
    CHECK(r2.graph.stem_links.size() == 2);
    CHECK(r2.graph.period_links.size() == 2);
    CHECK(validate_no_sinks(GraphHandle{r2.graph}).empty());
}

TEST_CASE("add_tails flags sink-free input") {
    auto result = add_tails(FiniteGraph{{"u"}, {{"e", "u", "u"}, {"f", "u", "u"}}});
    CHECK_FALSE(result.had_sinks);
    CHECK(result.graph.pattern.vertices.empty());
}

TEST_CASE("add_tails avoids colliding with existing edge ids") {
    FiniteGraph g{{"a", "s"}, {{"tail:s", "a", "s"}}};
    auto result = add_tails(g);
    REQUIRE(result.had_sinks);
    CHECK(validate(GraphHandle{result.graph}).ok());
    CHECK(result.graph.stem_links.front().id == "tail:s_");
}

TEST_CASE("materialize counts") {
    auto mat = materialize(corpus::g3_periodic(), 3);
    CHECK(mat.graph.vertices.size() == 6);
    CHECK(mat.graph.edges.size() == 11);
    REQUIRE(mat.frontier.size() == 1);
    CHECK(mat.frontier.front() == VertexRef::in_copy(3, "c"));
    CHECK(validate(GraphHandle{mat.graph}).ok());

    auto depth1 = materialize(corpus::g4_periodic(), 1);
    CHECK(depth1.graph.vertices.size() == 4); // stem v,w + copy-1 c,d
    // stem(3) + links(2) + copy-1 internals(3); truncated period links
    CHECK(depth1.graph.edges.size() == 8);

    PeriodicGraph stem_only;
    stem_only.stem = corpus::g5_finite();
    auto degenerate = materialize(stem_only, 2);
    CHECK(degenerate.graph.vertices.size() == 2);
    CHECK(degenerate.frontier.empty());
}

TEST_CASE("materializations are nested") {
    for (const auto& p : {corpus::g3_periodic(), corpus::g4_periodic()}) {
        auto small = materialize(p, 2);
        auto large = materialize(p, 5);
        std::set<VertexId> small_v(small.graph.vertices.begin(), small.graph.vertices.end());
        std::set<VertexId> large_v(large.graph.vertices.begin(), large.graph.vertices.end());
        for (const auto& v : small_v) CHECK(large_v.count(v));
        // induced: every large edge between small vertices appears in small
        std::set<std::string> small_e;
        for (const auto& e : small.graph.edges) small_e.insert(e.id);
        for (const auto& e : large.graph.edges)
            if (small_v.count(e.src) && small_v.count(e.dst)) CHECK(small_e.count(e.id));
    }
}

TEST_CASE("out_edges and path operations") {
    auto g1 = corpus::g1();
    auto outs = out_edges(g1, VertexRef::stem("u"));
    REQUIRE(outs.size() == 2);
    CHECK(outs[0].edge.id == "e");
    CHECK(outs[1].edge.id == "f");

    auto g4 = corpus::g4();
    Path beta1 = corpus::stem_path("v", {"b1"});
    Path loop_e = corpus::stem_path("w", {"e"});
    Path joined = path_concat(g4, beta1, loop_e);
    CHECK(path_source(joined) == VertexRef::stem("v"));
    CHECK(path_target(g4, joined) == VertexRef::stem("w"));
    CHECK(joined.size() == 2);

    Path at_c = corpus::copy_path(1, "c", {{"a", 1}});
    CHECK_THROWS_AS(path_concat(g4, beta1, at_c), NotComposableError);
}

TEST_CASE("path_concat is associative with empty identities") {
    auto g4 = corpus::g4();
    Path a = corpus::stem_path("v", {"b1"});
    Path b = corpus::stem_path("w", {"e", "f"});
    Path c = corpus::stem_path("w", {"b2"});
    auto left = path_concat(g4, path_concat(g4, a, b), c);
    auto right = path_concat(g4, a, path_concat(g4, b, c));
    CHECK(left == right);
    Path empty_front = empty_path_at(VertexRef::stem("v"));
    Path empty_back = empty_path_at(path_target(g4, a));
    CHECK(path_concat(g4, empty_front, a) == a);
    CHECK(path_concat(g4, a, empty_back) == a);
}

TEST_CASE("periodic incidence crosses copies") {
    auto g4 = corpus::g4();
    auto outs_c2 = out_edges(g4, VertexRef::in_copy(2, "c"));
    REQUIRE(outs_c2.size() == 2); // a within copy 2, p to copy 3
    CHECK(outs_c2[0].dst == VertexRef::in_copy(2, "d"));
    CHECK(outs_c2[1].dst == VertexRef::in_copy(3, "c"));
    auto ends = edge_endpoints(g4, EdgeRef{"q", 4});
    CHECK(ends.src == VertexRef::in_copy(4, "d"));
    CHECK(ends.dst == VertexRef::in_copy(5, "c"));
}

TEST_CASE("reference syntax round-trips") {
    for (const auto& v : {VertexRef::stem("v"), VertexRef::in_copy(3, "c")})
        CHECK(parse_vertex_ref(format_vertex_ref(v)) == v);
    for (const auto& e : {EdgeRef{"a", 0}, EdgeRef{"e", 7}})
        CHECK(parse_edge_ref(format_edge_ref(e)) == e);
    CHECK(parse_vertex_ref("u") == VertexRef::stem("u"));
    CHECK_THROWS_AS(parse_vertex_ref("copy:zero:c"), ParseError);
    CHECK_THROWS_AS(parse_vertex_ref("copy:0:c"), ParseError);
}

TEST_CASE("add_tails output is always sink-free on random graphs") {
    std::mt19937 rng(20250809);
    for (int i = 0; i < 200; ++i) {
        FiniteGraph g;
        std::uniform_int_distribution<int> vcount(1, 6);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        int n = vcount(rng);
        for (int k = 0; k < n; ++k) g.vertices.push_back("v" + std::to_string(k));
        int id = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (coin(rng) < 0.2)
                    g.edges.push_back({"e" + std::to_string(id++), g.vertices[a], g.vertices[b]});
        auto result = add_tails(g);
        if (result.had_sinks) {
            CHECK(validate(GraphHandle{result.graph}).ok());
            CHECK(validate_no_sinks(GraphHandle{result.graph}).empty());
        }
    }
}
