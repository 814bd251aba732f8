#include <doctest.h>

#include "secmeans/field.hpp"
#include "secmeans/rng.hpp"

using namespace secmeans;

namespace {

// Independent primality oracle: plain trial division.
bool trial_division_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

// Independent modulus oracle: scan upward from the bound.
long long scan_modulus(long long n, double x_max, long scale) {
    long long units = static_cast<long long>(std::ceil(x_max * static_cast<double>(scale)));
    long long bound = 2 * n * units + 1;
    long long c = bound + 1;
    while (!trial_division_prime(c)) ++c;
    return c;
}

}  // namespace

TEST_CASE("choose_modulus matches the trial-division oracle") {
    CHECK(choose_modulus(1, 1.0, 1).p == 5);
    CHECK(choose_modulus(10, 100.0, 1).p == scan_modulus(10, 100.0, 1));
    CHECK(choose_modulus(10, 100.0, 1).p == 2003);
    CHECK(choose_modulus(4, 7.5, 2).p == scan_modulus(4, 7.5, 2));
    CHECK(choose_modulus(4, 7.5, 2).p == 127);
}

TEST_CASE("choose_modulus output is prime, exceeds its bound, deterministic") {
    DetRng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + static_cast<int>(rng.uniform_below(64ULL));
        double x_max = 0.5 + 200.0 * rng.uniform01();
        long scale = 1 + static_cast<long>(rng.uniform_below(100ULL));
        FieldModulus m = choose_modulus(n, x_max, scale);
        long long units = static_cast<long long>(std::ceil(x_max * static_cast<double>(scale)));
        CHECK(m.p > 2 * n * units + 1);
        CHECK(trial_division_prime(static_cast<long long>(m.p)));
        CHECK(choose_modulus(n, x_max, scale).p == m.p);
    }
}

TEST_CASE("field arithmetic examples") {
    FieldModulus p5(BigInt(5)), p13(BigInt(13));
    CHECK((FieldElement(3, p5) + FieldElement(4, p5)).value() == 2);
    CHECK((FieldElement(5, p13) - FieldElement(9, p13)).value() == 9);
    FieldModulus p(BigInt(101));
    CHECK(FieldElement(1, p).scaled(p.p - 1).value() == p.p - 1);
}

TEST_CASE("operations across moduli are rejected") {
    FieldModulus p5(BigInt(5)), p13(BigInt(13));
    CHECK_THROWS_AS(FieldElement(3, p5) + FieldElement(3, p13), std::invalid_argument);
    CHECK_THROWS_AS(FieldElement(3, p5) - FieldElement(3, p13), std::invalid_argument);
}

TEST_CASE("add/sub round-trip property") {
    FieldModulus p = choose_modulus(8, 50.0, 4);
    DetRng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        FieldElement a = rng.uniform_field(p);
        FieldElement b = rng.uniform_field(p);
        CHECK((a + b) - b == a);
    }
}

TEST_CASE("encode examples") {
    FieldModulus p2003(BigInt(2003));
    FixedPointCodec codec10(10, p2003, 10, 100.0);
    CHECK(codec10.encode(0.0).value() == 0);
    CHECK(codec10.encode(-1.5).value() == 1988);
    FixedPointCodec codec1(1, FieldModulus(BigInt(5)), 1, 1.0);
    CHECK(codec1.encode(1.0).value() == 1);
    CHECK_THROWS_AS(codec10.encode(101.0), std::out_of_range);
}

TEST_CASE("decode_sum examples") {
    FieldModulus p2003(BigInt(2003));
    FixedPointCodec codec10(10, p2003, 10, 100.0);
    CHECK(codec10.decode_sum(FieldElement(0, p2003)) == 0.0);
    CHECK(codec10.decode_sum(FieldElement(1988, p2003)) == -1.5);
    FixedPointCodec codec1(1, p2003, 10, 100.0);
    CHECK(codec1.decode_sum(FieldElement(7, p2003)) == 7.0);
}

TEST_CASE("encode/decode round trip within quantization") {
    const double x_max = 20.0;
    for (long scale : {1L, 4L, 100L}) {
        FixedPointCodec codec(scale, choose_modulus(16, x_max, scale), 16, x_max);
        DetRng rng(scale);
        for (int trial = 0; trial < 300; ++trial) {
            double x = (2.0 * rng.uniform01() - 1.0) * x_max;
            double back = codec.decode_sum(codec.encode(x));
            CHECK(std::abs(back - x) <= 0.5 / static_cast<double>(scale) + 1e-12);
        }
    }
}

TEST_CASE("aggregate decode within m/(2*scale)") {
    const int n = 12;
    const double x_max = 10.0;
    for (long scale : {1L, 8L}) {
        FixedPointCodec codec(scale, choose_modulus(n, x_max, scale), n, x_max);
        DetRng rng(99 + scale);
        for (int trial = 0; trial < 100; ++trial) {
            int m = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
            FieldElement acc(0, codec.modulus);
            double true_sum = 0.0;
            for (int i = 0; i < m; ++i) {
                double x = (2.0 * rng.uniform01() - 1.0) * x_max;
                true_sum += x;
                acc = acc + codec.encode(x);
            }
            double decoded = codec.decode_sum(acc);
            CHECK(std::abs(decoded - true_sum) <=
                  static_cast<double>(m) / (2.0 * static_cast<double>(scale)) + 1e-9);
        }
    }
}

TEST_CASE("FieldModulus rejects composites") {
    CHECK_THROWS_AS(FieldModulus(BigInt(2001)), std::invalid_argument);
    CHECK(is_prime(BigInt("1000000007")));
    CHECK_FALSE(is_prime(BigInt("1000000008")));
}
