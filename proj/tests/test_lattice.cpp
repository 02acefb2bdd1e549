#include "doctest.h"
#include "ising/lattice.hpp"

using namespace ising;

namespace {

LatticeSpec spec(int L, int M) { return {L, M, 0.3, 0.45, BC::Periodic}; }

int euler(const DecoratedGraph& g) {
    int E = 0;
    for (const auto& e : g.edges) E += e.type != EdgeType::Crossing;
    return static_cast<int>(g.vertices.size()) - E + static_cast<int>(g.faces.size());
}

int unbounded(const DecoratedGraph& g) {
    int n = 0;
    for (const auto& f : g.faces) n += !f.bounded;
    return n;
}

}  // namespace

TEST_CASE("smallest cylinder") {
    auto g = build_decorated_graph(spec(2, 2));
    CHECK(g.vertices.size() == 24);
    CHECK(verify_clockwise_odd(g).empty());
    CHECK(euler(g) == 2);
    CHECK(unbounded(g) == 1);
}

TEST_CASE("face parity for all small cylinders") {
    for (int L = 2; L <= 6; ++L)
        for (int M = 1; M <= 6; ++M) {
            auto g = build_decorated_graph(spec(L, M));
            CAPTURE(L);
            CAPTURE(M);
            CHECK(verify_clockwise_odd(g).empty());
            CHECK(euler(g) == 2);
            CHECK(unbounded(g) == 1);
        }
}

TEST_CASE("degenerate M = 1") {
    auto g = build_decorated_graph(spec(2, 1));
    CHECK(verify_clockwise_odd(g).empty());
    for (const auto& e : g.edges) CHECK(e.type != EdgeType::LongV);
}

TEST_CASE("flipping one short edge breaks exactly its two faces") {
    auto g = build_decorated_graph(spec(4, 3));
    int e = -1;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
        if (g.edges[i].type == EdgeType::Short && g.vertices[g.edges[i].u].x == 1 && g.vertices[g.edges[i].u].y == 2) {
            e = i;
            break;
        }
    REQUIRE(e >= 0);
    g.edges[e].sign = -1;
    auto bad = verify_clockwise_odd(g);
    CHECK(bad.size() == 2);
    for (int f : bad) {
        bool touches = false;
        for (int he : g.faces[f].half_edges) touches |= he / 2 == e;
        CHECK(touches);
    }
}

TEST_CASE("lower auxiliary edge is directed right to left") {
    std::vector<AuxPair> aux{{{0, Side::Lower}, {2, Side::Lower}, 0.2}};
    auto g = build_decorated_graph(spec(4, 3), aux);
    int n = 0;
    for (const auto& e : g.edges)
        if (e.type == EdgeType::AuxLower) {
            ++n;
            CHECK(g.vertices[e.u].x == 2);
            CHECK(g.vertices[e.v].x == 0);
            CHECK(g.vertices[e.u].kind == V);
            CHECK(e.w == 0.2);
        }
    CHECK(n == 1);
    CHECK(verify_clockwise_odd(g).empty());
    CHECK(euler(g) == 2);
}

TEST_CASE("nested arcs on both boundaries keep the orientation admissible") {
    std::vector<AuxPair> aux{{{0, Side::Lower}, {5, Side::Lower}, 0.1},
                             {{1, Side::Lower}, {2, Side::Lower}, 0.1},
                             {{3, Side::Lower}, {4, Side::Lower}, 0.1},
                             {{1, Side::Upper}, {4, Side::Upper}, 0.1},
                             {{2, Side::Upper}, {3, Side::Upper}, 0.1}};
    auto g = build_decorated_graph(spec(6, 3), aux);
    CHECK(verify_clockwise_odd(g).empty());
    CHECK(euler(g) == 2);
}

TEST_CASE("crossing edge") {
    std::vector<AuxPair> aux{{{1, Side::Lower}, {1, Side::Upper}, 0.2}};
    auto g = build_decorated_graph(spec(4, 3), aux);
    int n = 0;
    for (const auto& e : g.edges)
        if (e.type == EdgeType::Crossing) {
            ++n;
            CHECK(g.vertices[e.u].kind == V);
            CHECK(g.vertices[e.u].y == 1);
            CHECK(g.vertices[e.v].kind == VB);
            CHECK(g.vertices[e.v].y == 3);
        }
    CHECK(n == 1);
    // one wrap edge per row
    CHECK(crossing_intersections(g).size() == 3);
    CHECK(verify_clockwise_odd(g).empty());
    CHECK(crossing_intersections(build_decorated_graph(spec(4, 3))).empty());
}

TEST_CASE("invalid auxiliary configurations") {
    CHECK_THROWS_WITH_AS(build_decorated_graph(spec(6, 2), {{{0, Side::Lower}, {3, Side::Lower}, 0.1},
                                                            {{2, Side::Lower}, {5, Side::Lower}, 0.1}}),
                         doctest::Contains("CrossingAuxEdges"), Error);
    CHECK_THROWS_WITH_AS(build_decorated_graph(spec(6, 2), {{{0, Side::Lower}, {3, Side::Lower}, 0.1},
                                                            {{2, Side::Lower}, {2, Side::Upper}, 0.1}}),
                         doctest::Contains("CrossingAuxEdges"), Error);
    CHECK_THROWS_WITH_AS(build_decorated_graph(spec(6, 2), {{{1, Side::Lower}, {1, Side::Lower}, 0.1}}),
                         doctest::Contains("InvalidPair"), Error);
    CHECK_THROWS_WITH_AS(build_decorated_graph(spec(6, 2), {{{1, Side::Lower}, {2, Side::Lower}, 0.1},
                                                            {{2, Side::Lower}, {4, Side::Lower}, 0.1}}),
                         doctest::Contains("InvalidPair"), Error);
    CHECK_THROWS_WITH_AS(build_decorated_graph(spec(6, 2), {{{1, Side::Lower}, {2, Side::Upper}, 0.1},
                                                            {{4, Side::Lower}, {4, Side::Upper}, 0.1}}),
                         doctest::Contains("MultipleCrossings"), Error);
}

TEST_CASE("json dump") {
    auto j = to_json(build_decorated_graph(spec(2, 2)));
    CHECK(j["vertices"].size() == 24);
    CHECK(j["edges"][0].contains("sign"));
    CHECK(j["faces"].size() > 0);
}
