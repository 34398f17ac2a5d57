#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "helpers.hpp"
#include "tilelang/core.hpp"

using namespace tilelang;

TEST_CASE("directions map to unit vectors and opposites") {
    CHECK(unit_vector(Direction::N) == Coord{0, 1});
    CHECK(unit_vector(Direction::E) == Coord{1, 0});
    CHECK(unit_vector(Direction::S) == Coord{0, -1});
    CHECK(unit_vector(Direction::W) == Coord{-1, 0});
    CHECK(opposite(Direction::N) == Direction::S);
    CHECK(opposite(Direction::E) == Direction::W);
    for (Direction d : all_directions) CHECK(opposite(opposite(d)) == d);
}

TEST_CASE("glue construction enforces the null-glue canon") {
    CHECK(Glue().is_null());
    CHECK(Glue("x", 1).strength == 1);
    CHECK_THROWS_AS(Glue("", 1), TileError);
    CHECK_THROWS_AS(Glue("x", 0), TileError);
    CHECK_THROWS_AS(Glue("x", 3), TileError);
}

TEST_CASE("bind strength requires equal labels and strengths") {
    CHECK(bind_strength(Glue("x", 1), Glue("x", 1)) == 1);
    CHECK(bind_strength(Glue("x", 1), Glue("x", 2)) == 0);
    CHECK(bind_strength(Glue("seed", 2), Glue("seed", 2)) == 2);
    CHECK(bind_strength(Glue(), Glue()) == 0);
    CHECK(bind_strength(Glue("x", 1), Glue("y", 1)) == 0);
}

TEST_CASE("bind strength is symmetric") {
    std::mt19937_64 rng(7);
    std::vector<Glue> glues = {Glue(), Glue("a", 1), Glue("a", 2), Glue("b", 1), Glue("b", 2)};
    std::uniform_int_distribution<std::size_t> pick(0, glues.size() - 1);
    for (int i = 0; i < 200; ++i) {
        const Glue& a = glues[pick(rng)];
        const Glue& b = glues[pick(rng)];
        CHECK(bind_strength(a, b) == bind_strength(b, a));
    }
}

namespace {

TileSet two_tile_set(const Glue& east_of_left, const Glue& west_of_right) {
    TileSet ts;
    TileType l;
    l.name = "left";
    l.glue(Direction::E) = east_of_left;
    TileType r;
    r.name = "right";
    r.glue(Direction::W) = west_of_right;
    ts.add(l);
    ts.add(r);
    return ts;
}

}  // namespace

TEST_CASE("binding graph edges come from matching facing glues") {
    SECTION("empty assembly") {
        TileSet ts;
        Assembly a;
        auto g = binding_graph(a, ts);
        CHECK(g.vertices.empty());
        CHECK(g.edges.empty());
    }
    SECTION("two tiles, matching strength-1 glues") {
        TileSet ts = two_tile_set(Glue("g", 1), Glue("g", 1));
        Assembly a;
        a.place({0, 0}, 0);
        a.place({1, 0}, 1);
        auto g = binding_graph(a, ts);
        REQUIRE(g.edges.size() == 1);
        CHECK(g.edges[0].weight == 1);
    }
    SECTION("counter seed pair binds at strength 2 via the seed glue") {
        TileSet ts;
        TileType lsbseed;
        lsbseed.name = "lsbseed";
        lsbseed.glue(Direction::W) = Glue("seed", 2);
        TileType msbseed;
        msbseed.name = "msbseed";
        msbseed.glue(Direction::E) = Glue("seed", 2);
        ts.add(lsbseed);
        ts.add(msbseed);
        Assembly a;
        a.place({0, 0}, *ts.find("lsbseed"));
        a.place({-1, 0}, *ts.find("msbseed"));
        auto g = binding_graph(a, ts);
        REQUIRE(g.edges.size() == 1);
        CHECK(g.edges[0].weight == 2);
    }
    SECTION("edge weights are always 1 or 2") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            TileSet ts = testutil::random_tile_set(rng);
            Assembly a = testutil::random_assembly(rng, ts, 10);
            for (const auto& e : binding_graph(a, ts).edges) {
                CHECK(e.weight >= 1);
                CHECK(e.weight <= 2);
            }
        }
    }
}

TEST_CASE("tau-stability") {
    SECTION("a single tile is stable by convention") {
        TileSet ts = two_tile_set(Glue(), Glue());
        Assembly a;
        a.place({0, 0}, 0);
        CHECK(is_tau_stable(a, ts, 2));
    }
    SECTION("one strength-1 bond does not survive temperature 2") {
        TileSet ts = two_tile_set(Glue("g", 1), Glue("g", 1));
        Assembly a;
        a.place({0, 0}, 0);
        a.place({1, 0}, 1);
        CHECK_FALSE(is_tau_stable(a, ts, 2));
        CHECK(is_tau_stable(a, ts, 1));
    }
    SECTION("2x2 square with strength-1 internal glues is 2-stable") {
        // Every facing pair inside the square matches at strength 1.
        TileSet ts;
        for (int i = 0; i < 4; ++i) {
            TileType t;
            t.name = "sq" + std::to_string(i);
            for (Direction d : all_directions) t.glue(d) = Glue("s", 1);
            ts.add(t);
        }
        Assembly a;
        a.place({0, 0}, 0);
        a.place({1, 0}, 1);
        a.place({0, 1}, 2);
        a.place({1, 1}, 3);
        // Expected value established by enumerating all proper bipartitions.
        REQUIRE(testutil::brute_stable(a, ts, 2));
        CHECK(is_tau_stable(a, ts, 2));
    }
    SECTION("disconnected occupied set is reported unstable immediately") {
        TileSet ts = two_tile_set(Glue("g", 1), Glue("g", 1));
        Assembly a;
        a.place({0, 0}, 0);
        a.place({5, 5}, 1);
        CHECK_FALSE(is_tau_stable(a, ts, 1));
    }
}

TEST_CASE("min-cut stability agrees with bipartition enumeration") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        TileSet ts = testutil::random_tile_set(rng);
        Assembly a = testutil::random_assembly(rng, ts, 12);
        for (int tau : {1, 2}) {
            INFO("trial " << trial << " tau " << tau);
            CHECK(is_tau_stable(a, ts, tau) == testutil::brute_stable(a, ts, tau));
            ++checked;
        }
    }
    CHECK(checked == 240);
}

TEST_CASE("for tau=1, binding-connectivity is exactly stability") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        TileSet ts = testutil::random_tile_set(rng);
        Assembly a = testutil::random_assembly(rng, ts, 10);
        auto g = binding_graph(a, ts);
        // union-find over binding edges
        std::vector<std::size_t> parent(g.vertices.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (const auto& e : g.edges) parent[find(e.a)] = find(e.b);
        bool connected = true;
        for (std::size_t i = 0; i < parent.size(); ++i)
            if (find(i) != find(0)) connected = false;
        CHECK(is_tau_stable(a, ts, 1) == connected);
    }
}

TEST_CASE("tile sets reject conflicting names and deduplicate identical tiles") {
    TileSet ts;
    TileType t;
    t.name = "x";
    ts.add(t);
    ts.add(t);  // identical: no-op
    CHECK(ts.size() == 1);
    TileType other;
    other.name = "x";
    other.display_label = "different";
    CHECK_THROWS_AS(ts.add(other), TileError);
}
