#include <catch2/catch_amalgamated.hpp>

#include "qpreth/lattice.hpp"

using namespace qpreth;

TEST_CASE("cube lattice volume and membership", "[lattice]") {
    auto lat = LatticeSpec::cube(2, 1, 2);
    REQUIRE(lat.volume() == 9);
    REQUIRE(lat.sites().size() == 9);
    REQUIRE(lat.contains({0, 0}));
    REQUIRE(lat.contains({-1, 1}));
    REQUIRE_FALSE(lat.contains({2, 0}));
    REQUIRE_FALSE(lat.contains({0}));

    auto chain = LatticeSpec::chain(6);
    REQUIRE(chain.volume() == 6);
    REQUIRE(chain.sites().size() == 6);
}

TEST_CASE("adjacency is l1 distance one", "[lattice]") {
    REQUIRE(LatticeSpec::adjacent({0, 0}, {0, 1}));
    REQUIRE(LatticeSpec::adjacent({2}, {1}));
    REQUIRE_FALSE(LatticeSpec::adjacent({0, 0}, {1, 1}));
    REQUIRE_FALSE(LatticeSpec::adjacent({0}, {0}));
}

TEST_CASE("support sets sort, dedupe and know connectivity", "[lattice]") {
    SupportSet s({{2}, {0}, {1}, {2}});
    REQUIRE(s.size() == 3);
    REQUIRE(s.sites.front() == Site{0});
    REQUIRE(s.connected());

    SupportSet gap({{0}, {2}});
    REQUIRE_FALSE(gap.connected());

    SupportSet ell({{0, 0}, {0, 1}, {1, 1}});
    REQUIRE(ell.connected());

    REQUIRE_THROWS_AS(SupportSet(std::vector<Site>{}), config_error);
}

TEST_CASE("support union and overlap", "[lattice]") {
    SupportSet a = interval_support(0, 1);
    SupportSet b = interval_support(1, 2);
    SupportSet c = interval_support(3, 4);
    REQUIRE(a.overlaps(b));
    REQUIRE_FALSE(a.overlaps(c));
    REQUIRE(a.unite(b).size() == 3);
    REQUIRE(a.unite(b).connected());
}

TEST_CASE("bad lattice parameters are rejected", "[lattice]") {
    REQUIRE_THROWS_AS(LatticeSpec::cube(0, 1), config_error);
    REQUIRE_THROWS_AS(LatticeSpec::cube(1, -1), config_error);
    REQUIRE_THROWS_AS(LatticeSpec::chain(0), config_error);
}
