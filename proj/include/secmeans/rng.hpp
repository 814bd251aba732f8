#pragma once

#include <cstdint>
#include <initializer_list>

#include "secmeans/field.hpp"

namespace secmeans {

/// Deterministic random stream (splitmix64 core). Hand-rolled so that
/// identical seeds give identical draws on every platform and compiler;
/// std distributions are implementation-defined and would break the
/// byte-identical reproducibility contract.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    /// Derive an independent substream keyed by a list of tags
    /// (e.g. master seed -> per-node, per-iteration streams).
    static DetRng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

    std::uint64_t next_u64();
    /// Uniform in [0, bound) by rejection sampling; bound > 0.
    std::uint64_t uniform_below(std::uint64_t bound);
    BigInt uniform_below(const BigInt& bound);
    FieldElement uniform_field(const FieldModulus& m);
    /// Uniform in [0, 1) with 53 random bits.
    double uniform01();
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::uint64_t state_;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace secmeans
