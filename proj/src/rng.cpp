#include "secmeans/rng.hpp"

#include <cmath>

namespace secmeans {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

DetRng DetRng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = seed;
    std::uint64_t mixed = splitmix64(s);
    for (std::uint64_t tag : tags) {
        s = mixed ^ (tag + 0x9e3779b97f4a7c15ULL);
        mixed = splitmix64(s);
    }
    return DetRng(mixed);
}

std::uint64_t DetRng::next_u64() { return splitmix64(state_); }

std::uint64_t DetRng::uniform_below(std::uint64_t bound) {
    // Rejection on the top multiple of bound.
    std::uint64_t limit = bound * ((~0ULL) / bound);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

BigInt DetRng::uniform_below(const BigInt& bound) {
    if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
    if (bound <= BigInt((std::numeric_limits<std::uint64_t>::max)())) {
        return BigInt(uniform_below(static_cast<std::uint64_t>(bound)));
    }
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
    unsigned words = (bits + 63) / 64;
    for (;;) {
        BigInt x = 0;
        for (unsigned w = 0; w < words; ++w) {
            x <<= 64;
            x += BigInt(next_u64());
        }
        x >>= (words * 64 - bits);
        if (x < bound) return x;
    }
}

FieldElement DetRng::uniform_field(const FieldModulus& m) {
    return FieldElement(uniform_below(m.p), m);
}

double DetRng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double DetRng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

}  // namespace secmeans
