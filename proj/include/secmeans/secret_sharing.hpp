#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "secmeans/field.hpp"
#include "secmeans/topology.hpp"
#include "secmeans/transcript.hpp"

namespace secmeans {

/// r_i^k for every ordered direction (i,k) of every edge; each entry is a
/// vector because whole input vectors are randomized in one exchange.
struct PairwiseRandoms {
    std::map<std::pair<int, int>, std::vector<FieldElement>> r;
};

/// Obfuscated shares: edge shares s_i^k = r_i^k - r_k^i and own shares
/// s_i^i = a_i - sum_k s_i^k. Edge shares are antisymmetric, so the own
/// shares conserve the total input sum mod p.
struct ShareSet {
    std::map<std::pair<int, int>, std::vector<FieldElement>> edge;
    std::vector<std::vector<FieldElement>> own;  // indexed by node
};

/// One uniform draw per ordered edge direction per vector entry.
/// Randomness comes from per-node streams derived from (master_seed,
/// node, iter), so transcripts are reproducible. When `store` is given,
/// each draw is logged at both endpoints.
PairwiseRandoms exchange_randoms(const Topology& g, std::size_t width, const FieldModulus& p,
                                 std::uint64_t master_seed, int iter,
                                 TranscriptStore* store = nullptr);

/// Algorithm step: fold the pairwise randoms into per-node obfuscated
/// shares. `inputs` is one field vector per node, all of width `width`.
ShareSet make_shares(const std::vector<std::vector<FieldElement>>& inputs,
                     const PairwiseRandoms& randoms, const Topology& g,
                     TranscriptStore* store = nullptr, int iter = 0);

/// Final reconstruction: round(s_bar * n) mod p, which equals the input
/// sum mod p once the averaging protocol is close enough. Throws when
/// s_bar * n sits exactly halfway between integers, since rounding would
/// then be ambiguous.
FieldElement reconstruct_average(const Rational& s_bar, int n, const FieldModulus& p);

/// Nearest integer to a rational, half away from zero.
BigInt round_rational(const Rational& r);

}  // namespace secmeans
