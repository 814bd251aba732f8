#include <doctest.h>

#include <algorithm>
#include <set>

#include "secmeans/topology.hpp"

using namespace secmeans;

TEST_CASE("ring adjacency") {
    Topology g3 = Topology::ring(3);
    CHECK(g3.neighbors(0) == std::vector<int>{1, 2});
    Topology g5 = Topology::ring(5);
    CHECK(g5.neighbors(2) == std::vector<int>{1, 3});
    CHECK(Topology::ring(1).edges().empty());
    CHECK(Topology::ring(2).edges().size() == 1);
    CHECK_THROWS_AS(g3.neighbors(3), std::out_of_range);
}

TEST_CASE("neighbor symmetry on random graphs") {
    for (std::uint64_t seed : {1ULL, 7ULL, 42ULL}) {
        Topology g = Topology::erdos_renyi(10, 0.5, seed);
        for (int i = 0; i < g.size(); ++i) {
            for (int j : g.neighbors(i)) {
                const auto& back = g.neighbors(j);
                CHECK(std::find(back.begin(), back.end(), i) != back.end());
            }
        }
    }
}

TEST_CASE("erdos_renyi edge cases and determinism") {
    Topology complete = Topology::erdos_renyi(6, 1.0, 3);
    CHECK(complete.edges().size() == 15);
    Topology a = Topology::erdos_renyi(8, 0.4, 7);
    Topology b = Topology::erdos_renyi(8, 0.4, 7);
    CHECK(a.edges() == b.edges());
    Topology c = Topology::erdos_renyi(8, 0.4, 8);
    CHECK(a.edges() != c.edges());  // overwhelmingly likely under a fresh seed
}

TEST_CASE("random_geometric determinism and radius extremes") {
    Topology a = Topology::random_geometric(10, 0.3, 5);
    Topology b = Topology::random_geometric(10, 0.3, 5);
    CHECK(a.edges() == b.edges());
    // radius covering the whole unit square yields the complete graph
    Topology full = Topology::random_geometric(7, 2.0, 5);
    CHECK(full.edges().size() == 21);
}

TEST_CASE("connected_components examples") {
    CHECK(Topology::ring(4).connected_components({}).empty());
    auto whole = Topology::ring(4).connected_components({0, 1, 2, 3});
    REQUIRE(whole.size() == 1);
    CHECK(whole[0] == std::vector<int>{0, 1, 2, 3});
    auto split = Topology::ring(6).connected_components({0, 1, 3, 4});
    REQUIRE(split.size() == 2);
    CHECK(split[0] == std::vector<int>{0, 1});
    CHECK(split[1] == std::vector<int>{3, 4});
}

namespace {

// Brute-force connectivity oracle: i~j iff some path inside the subset.
bool path_exists(const Topology& g, const std::set<int>& subset, int a, int b) {
    std::set<int> frontier{a}, seen{a};
    while (!frontier.empty()) {
        std::set<int> next;
        for (int v : frontier) {
            for (int w : g.neighbors(v)) {
                if (subset.count(w) && !seen.count(w)) {
                    next.insert(w);
                    seen.insert(w);
                }
            }
        }
        frontier = next;
    }
    return seen.count(b) > 0;
}

}  // namespace

TEST_CASE("connected_components is a partition into maximal connected parts") {
    Topology g = Topology::erdos_renyi(9, 0.25, 13);
    std::vector<int> subset{0, 1, 2, 4, 5, 7, 8};
    std::set<int> subset_set(subset.begin(), subset.end());
    auto parts = g.connected_components(subset);
    std::set<int> covered;
    for (const auto& part : parts) {
        for (int v : part) {
            CHECK(subset_set.count(v));
            CHECK_FALSE(covered.count(v));
            covered.insert(v);
        }
        // internal connectivity
        for (int v : part) CHECK(path_exists(g, subset_set, part[0], v));
    }
    CHECK(covered.size() == subset.size());
    // maximality: nodes in different parts are not connected
    for (std::size_t a = 0; a < parts.size(); ++a) {
        for (std::size_t b = a + 1; b < parts.size(); ++b) {
            CHECK_FALSE(path_exists(g, subset_set, parts[a][0], parts[b][0]));
        }
    }
}

TEST_CASE("honest_neighbor_condition") {
    Topology g3 = Topology::ring(3);
    auto all_honest = honest_neighbor_condition(g3, HonestPartition::from_corrupted(3, {}));
    for (const auto& [node, ok] : all_honest) CHECK(ok);

    auto lone = honest_neighbor_condition(g3, HonestPartition::from_corrupted(3, {1, 2}));
    REQUIRE(lone.size() == 1);
    CHECK(lone[0].first == 0);
    CHECK_FALSE(lone[0].second);

    auto mixed =
        honest_neighbor_condition(Topology::ring(6), HonestPartition::from_corrupted(6, {2, 4, 5}));
    REQUIRE(mixed.size() == 3);
    CHECK(mixed[0] == std::pair<int, bool>{0, true});
    CHECK(mixed[1] == std::pair<int, bool>{1, true});
    CHECK(mixed[2] == std::pair<int, bool>{3, false});
}

TEST_CASE("edge list round trip") {
    Topology g = Topology::erdos_renyi(8, 0.4, 7);
    Topology back = Topology::from_edge_list(g.to_edge_list());
    CHECK(back.size() == g.size());
    CHECK(back.edges() == g.edges());
}

TEST_CASE("invalid constructions are rejected") {
    CHECK_THROWS_AS(Topology(3, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Topology(3, {{0, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(Topology::erdos_renyi(4, 1.5, 0), std::invalid_argument);
}
