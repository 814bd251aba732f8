#include <doctest.h>

#include "secmeans/rng.hpp"
#include "secmeans/secret_sharing.hpp"

using namespace secmeans;

namespace {

std::vector<std::vector<FieldElement>> scalar_inputs(const std::vector<long>& values,
                                                     const FieldModulus& p) {
    std::vector<std::vector<FieldElement>> out;
    for (long v : values) out.push_back({FieldElement(BigInt(v), p)});
    return out;
}

}  // namespace

TEST_CASE("exchange_randoms basics") {
    FieldModulus p(BigInt(13));
    CHECK(exchange_randoms(Topology::ring(1), 1, p, 1, 0).r.empty());
    CHECK(exchange_randoms(Topology::ring(2), 1, p, 1, 0).r.size() == 2);

    auto a = exchange_randoms(Topology::ring(3), 1, p, 1, 0);
    CHECK(a.r.size() == 6);
    auto b = exchange_randoms(Topology::ring(3), 1, p, 1, 0);
    for (const auto& [key, vals] : a.r) {
        CHECK(b.r.at(key)[0] == vals[0]);
    }
    auto c = exchange_randoms(Topology::ring(3), 1, p, 2, 0);
    bool any_diff = false;
    for (const auto& [key, vals] : a.r) any_diff |= !(c.r.at(key)[0] == vals[0]);
    CHECK(any_diff);
}

TEST_CASE("make_shares on an isolated node") {
    FieldModulus p(BigInt(13));
    auto randoms = exchange_randoms(Topology::ring(1), 1, p, 0, 0);
    auto shares = make_shares(scalar_inputs({9}, p), randoms, Topology::ring(1));
    CHECK(shares.own[0][0].value() == 9);
    CHECK(shares.edge.empty());
}

TEST_CASE("two-node hand-evaluated shares") {
    FieldModulus p(BigInt(13));
    Topology g = Topology::ring(2);
    PairwiseRandoms randoms;
    randoms.r[{0, 1}] = {FieldElement(5, p)};
    randoms.r[{1, 0}] = {FieldElement(9, p)};
    auto shares = make_shares(scalar_inputs({3, 4}, p), randoms, g);
    CHECK(shares.edge.at({0, 1})[0].value() == 9);   // (5-9) mod 13
    CHECK(shares.own[0][0].value() == 7);            // (3-9) mod 13
    CHECK(shares.edge.at({1, 0})[0].value() == 4);   // (9-5) mod 13
    CHECK(shares.own[1][0].value() == 0);            // (4-4) mod 13
    // sum conservation: 7 + 0 = 3 + 4 (mod 13)
    CHECK((shares.own[0][0] + shares.own[1][0]).value() == 7);
}

TEST_CASE("symmetric randoms cancel") {
    FieldModulus p(BigInt(31));
    Topology g = Topology::ring(4);
    PairwiseRandoms randoms;
    for (const auto& [i, j] : g.edges()) {
        randoms.r[{i, j}] = {FieldElement(11, p)};
        randoms.r[{j, i}] = {FieldElement(11, p)};
    }
    auto shares = make_shares(scalar_inputs({5, 6, 7, 8}, p), randoms, g);
    for (const auto& [key, vals] : shares.edge) CHECK(vals[0].value() == 0);
    for (int i = 0; i < 4; ++i) CHECK(shares.own[i][0].value() == 5 + i);
}

TEST_CASE("antisymmetry and conservation over random triples") {
    DetRng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform_below(10ULL));
        Topology g = Topology::erdos_renyi(n, 0.5, rng.next_u64());
        FieldModulus p = choose_modulus(n, 50.0, 1);
        std::vector<long> values(n);
        long total = 0;
        for (auto& v : values) {
            v = static_cast<long>(rng.uniform_below(101ULL)) - 50;
            total += v;
        }
        auto randoms = exchange_randoms(g, 1, p, rng.next_u64(), 0);
        auto shares = make_shares(scalar_inputs(values, p), randoms, g);

        for (const auto& [i, j] : g.edges()) {
            CHECK((shares.edge.at({i, j})[0] + shares.edge.at({j, i})[0]).value() == 0);
        }
        FieldElement own_sum(0, p);
        for (int i = 0; i < n; ++i) own_sum = own_sum + shares.own[i][0];
        CHECK(own_sum == FieldElement(BigInt(total), p));
    }
}

TEST_CASE("determinism: identical seeds give identical share sets") {
    Topology g = Topology::erdos_renyi(8, 0.5, 3);
    FieldModulus p = choose_modulus(8, 20.0, 1);
    std::vector<long> values{1, -2, 3, -4, 5, -6, 7, -8};
    auto r1 = exchange_randoms(g, 1, p, 99, 0);
    auto r2 = exchange_randoms(g, 1, p, 99, 0);
    auto s1 = make_shares(scalar_inputs(values, p), r1, g);
    auto s2 = make_shares(scalar_inputs(values, p), r2, g);
    for (int i = 0; i < 8; ++i) CHECK(s1.own[i][0] == s2.own[i][0]);
}

TEST_CASE("reconstruct_average") {
    FieldModulus p(BigInt(13));
    // single node: s_bar is the share itself
    CHECK(reconstruct_average(Rational(9), 1, p).value() == 9);
    // two-node example: s_bar = 7/2, round(7) = 7
    CHECK(reconstruct_average(Rational(7) / 2, 2, p).value() == 7);
    CHECK(reconstruct_average(Rational(0), 5, p).value() == 0);
    // ambiguity: s_bar*n exactly halfway
    CHECK_THROWS_AS(reconstruct_average(Rational(7) / 4, 2, p), std::runtime_error);
}

TEST_CASE("round_rational is half away from zero") {
    CHECK(round_rational(Rational(5) / 2) == 3);
    CHECK(round_rational(Rational(-5) / 2) == -3);
    CHECK(round_rational(Rational(7) / 3) == 2);
    CHECK(round_rational(Rational(-7) / 3) == -2);
    CHECK(round_rational(Rational(4)) == 4);
}
