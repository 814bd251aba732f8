#include "secmeans/secret_sharing.hpp"

#include "secmeans/rng.hpp"

namespace secmeans {

PairwiseRandoms exchange_randoms(const Topology& g, std::size_t width, const FieldModulus& p,
                                 std::uint64_t master_seed, int iter, TranscriptStore* store) {
    PairwiseRandoms out;
    for (int i = 0; i < g.size(); ++i) {
        // Node i's stream covers its draws toward every neighbor in id order.
        DetRng rng = DetRng::derive(master_seed, {0x72616e64ULL, static_cast<std::uint64_t>(i),
                                                  static_cast<std::uint64_t>(iter)});
        for (int k : g.neighbors(i)) {
            std::vector<FieldElement> draws;
            draws.reserve(width);
            for (std::size_t e = 0; e < width; ++e) draws.push_back(rng.uniform_field(p));
            if (store) {
                RandomRecord sent{iter, k, true, {}};
                RandomRecord recv{iter, i, false, {}};
                for (const auto& d : draws) {
                    sent.values.push_back(d.value());
                    recv.values.push_back(d.value());
                }
                store->nodes[i].randoms.push_back(std::move(sent));
                store->nodes[k].randoms.push_back(std::move(recv));
            }
            out.r.emplace(std::make_pair(i, k), std::move(draws));
        }
    }
    return out;
}

ShareSet make_shares(const std::vector<std::vector<FieldElement>>& inputs,
                     const PairwiseRandoms& randoms, const Topology& g, TranscriptStore* store,
                     int iter) {
    const int n = g.size();
    if (static_cast<int>(inputs.size()) != n) {
        throw std::invalid_argument("make_shares: need one input vector per node");
    }
    ShareSet out;
    out.own.resize(n);
    for (int i = 0; i < n; ++i) {
        std::vector<FieldElement> own = inputs[i];
        for (int k : g.neighbors(i)) {
            const auto& r_ik = randoms.r.at({i, k});
            const auto& r_ki = randoms.r.at({k, i});
            std::vector<FieldElement> s_ik;
            s_ik.reserve(own.size());
            for (std::size_t e = 0; e < own.size(); ++e) {
                FieldElement s = r_ik[e] - r_ki[e];
                own[e] = own[e] - s;
                s_ik.push_back(std::move(s));
            }
            out.edge.emplace(std::make_pair(i, k), std::move(s_ik));
        }
        if (store) {
            OwnInputRecord in_rec{iter, {}};
            OwnShareRecord share_rec{iter, {}};
            for (const auto& v : inputs[i]) in_rec.values.push_back(v.value());
            for (const auto& v : own) share_rec.values.push_back(v.value());
            store->nodes[i].own_inputs.push_back(std::move(in_rec));
            store->nodes[i].own_shares.push_back(std::move(share_rec));
        }
        out.own[i] = std::move(own);
    }
    return out;
}

BigInt round_rational(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);  // always positive
    BigInt twice = 2 * num;
    if (num >= 0) {
        return (twice + den) / (2 * den);
    }
    return -((-twice + den) / (2 * den));
}

FieldElement reconstruct_average(const Rational& s_bar, int n, const FieldModulus& p) {
    Rational total = s_bar * n;
    BigInt num = boost::multiprecision::numerator(total);
    BigInt den = boost::multiprecision::denominator(total);
    if (den != 1 && 2 * (num % den) * (num < 0 ? -1 : 1) == den) {
        throw std::runtime_error("reconstruct_average: s_bar*n is halfway between integers");
    }
    return FieldElement(round_rational(total), p);
}

}  // namespace secmeans
