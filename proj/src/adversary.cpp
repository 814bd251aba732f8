#include "secmeans/adversary.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "secmeans/averaging.hpp"
#include "secmeans/secret_sharing.hpp"

namespace secmeans {

namespace {

const std::vector<BigInt>* find_own_share(const NodeTranscript& nt, int iter) {
    for (const auto& r : nt.own_shares) {
        if (r.iter == iter) return &r.values;
    }
    return nullptr;
}

BigInt rational_as_integer(const Rational& r) {
    if (boost::multiprecision::denominator(r) != 1) {
        throw std::runtime_error("coalition_knowledge: expected an integer-valued message");
    }
    return boost::multiprecision::numerator(r);
}

BigInt mod_p(BigInt v, const BigInt& p) {
    v %= p;
    if (v < 0) v += p;
    return v;
}

// Tree protocol: split the component into maximal pieces connected in
// the BFS spanning tree, then account each piece's total from the up
// messages crossing its boundary (all observed by corrupted nodes, or
// published when the piece contains the root).
std::vector<BigInt> tree_component_sum(const TranscriptStore& store, const Topology& g,
                                       const std::vector<int>& comp, int t, std::size_t width) {
    const BigInt& p = store.p;
    std::vector<int> parents = bfs_tree_parents(g);
    std::vector<char> in_comp(g.size(), 0);
    for (int v : comp) in_comp[v] = 1;

    // Pieces via BFS over tree edges restricted to the component.
    std::vector<int> piece_of(g.size(), -1);
    std::vector<std::vector<int>> pieces;
    for (int start : comp) {
        if (piece_of[start] >= 0) continue;
        int id = static_cast<int>(pieces.size());
        pieces.push_back({});
        std::vector<int> stack{start};
        piece_of[start] = id;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            pieces[id].push_back(v);
            auto visit = [&](int w) {
                if (w >= 0 && in_comp[w] && piece_of[w] < 0) {
                    piece_of[w] = id;
                    stack.push_back(w);
                }
            };
            visit(parents[v]);
            for (int w = 0; w < g.size(); ++w) {
                if (parents[w] == v) visit(w);
            }
        }
    }

    auto find_up_msg = [&](int holder, int peer, bool sent) -> const std::vector<Rational>* {
        for (const auto& msg : store.nodes[holder].tree_msgs) {
            if (msg.iter == t && msg.up && msg.sent == sent && msg.peer == peer) {
                return &msg.values;
            }
        }
        return nullptr;
    };

    std::vector<BigInt> total(width, 0);
    for (const auto& piece : pieces) {
        std::vector<char> in_piece(g.size(), 0);
        for (int v : piece) in_piece[v] = 1;
        int top = -1;
        for (int v : piece) {
            if (parents[v] < 0 || !in_piece[parents[v]]) {
                top = v;
                break;
            }
        }
        // The piece's subtree-sum as seen leaving its top.
        std::vector<BigInt> piece_sum(width);
        if (parents[top] < 0) {
            // Top is the root: its up-sum is the network total, published.
            piece_sum = store.published[t].field_sums;
        } else {
            const auto* up = find_up_msg(parents[top], top, false);
            if (!up) throw std::runtime_error("coalition_knowledge: missing tree up message");
            for (std::size_t e = 0; e < width; ++e) {
                piece_sum[e] = mod_p(rational_as_integer((*up)[e]), p);
            }
        }
        // Remove subtree sums entering the piece from corrupted children.
        for (int v : piece) {
            for (int w : g.neighbors(v)) {
                if (parents[w] == v && !in_piece[w]) {
                    const auto* up = find_up_msg(w, v, true);
                    if (!up) throw std::runtime_error("coalition_knowledge: missing child message");
                    for (std::size_t e = 0; e < width; ++e) {
                        piece_sum[e] = mod_p(piece_sum[e] - rational_as_integer((*up)[e]), p);
                    }
                }
            }
        }
        for (std::size_t e = 0; e < width; ++e) total[e] = mod_p(total[e] + piece_sum[e], p);
    }
    return total;
}

// Iterative protocols: the component's state total moves only through
// boundary edges, every crossing is observed by a corrupted endpoint,
// and the final total is within 1/2 of M * S / n by the convergence
// certificate. Rounding the difference recovers the initial total
// exactly.
std::vector<BigInt> flux_component_sum(const TranscriptStore& store, const Topology& g,
                                       const HonestPartition& part, const std::vector<int>& comp,
                                       int t, std::size_t width) {
    const BigInt& p = store.p;
    const int n = store.n;
    std::vector<char> in_comp(g.size(), 0);
    for (int v : comp) in_comp[v] = 1;

    std::vector<Rational> flux(width, Rational(0));
    std::vector<Rational> final_value;  // some corrupted node's final state

    if (store.protocol == "sync") {
        MetropolisWeights w = metropolis_weights(g);
        long rounds = store.rounds_per_iter.at(t);
        for (int c : part.corrupted) {
            const auto& nt = store.nodes[c];
            // (round, from) -> received state of the sender at that round
            std::map<std::pair<int, int>, const std::vector<Rational>*> inbox;
            for (const auto& msg : nt.sync_msgs) {
                if (msg.iter == t) inbox[{msg.round, msg.from}] = &msg.values;
            }
            const auto* share = find_own_share(nt, t);
            if (!share) throw std::runtime_error("coalition_knowledge: missing own share");
            std::vector<Rational> value(width);
            for (std::size_t e = 0; e < width; ++e) value[e] = Rational((*share)[e]);
            for (long r = 0; r < rounds; ++r) {
                std::vector<Rational> next = value;
                for (auto& v : next) v *= w.self[c];
                for (int j : g.neighbors(c)) {
                    auto it = inbox.find({static_cast<int>(r), j});
                    if (it == inbox.end()) {
                        throw std::runtime_error("coalition_knowledge: missing sync message");
                    }
                    const Rational& wij = w.edge.at({std::min(c, j), std::max(c, j)});
                    const auto& sender = *it->second;
                    for (std::size_t e = 0; e < width; ++e) next[e] += wij * sender[e];
                    if (in_comp[j]) {
                        for (std::size_t e = 0; e < width; ++e) {
                            flux[e] += wij * (value[e] - sender[e]);
                        }
                    }
                }
                value = std::move(next);
            }
            if (final_value.empty()) final_value = value;
        }
    } else if (store.protocol == "gossip") {
        for (int c : part.corrupted) {
            const auto& nt = store.nodes[c];
            const auto* share = find_own_share(nt, t);
            if (!share) throw std::runtime_error("coalition_knowledge: missing own share");
            std::vector<Rational> value(width);
            for (std::size_t e = 0; e < width; ++e) value[e] = Rational((*share)[e]);
            for (const auto& ev : nt.gossip_events) {
                if (ev.iter != t) continue;
                if (in_comp[ev.partner]) {
                    for (std::size_t e = 0; e < width; ++e) {
                        flux[e] += (ev.self_before[e] - ev.partner_before[e]) / 2;
                    }
                }
                for (std::size_t e = 0; e < width; ++e) {
                    value[e] = (ev.self_before[e] + ev.partner_before[e]) / 2;
                }
            }
            if (final_value.empty()) final_value = value;
        }
    } else {
        throw std::runtime_error("coalition_knowledge: unknown protocol " + store.protocol);
    }

    // Exact network total from any corrupted node's converged value.
    std::vector<BigInt> network_sum(width);
    for (std::size_t e = 0; e < width; ++e) {
        network_sum[e] = round_rational(final_value[e] * n);
    }
    const int m_size = static_cast<int>(comp.size());
    std::vector<BigInt> total(width);
    for (std::size_t e = 0; e < width; ++e) {
        Rational estimate = Rational(network_sum[e]) * m_size / n - flux[e];
        total[e] = mod_p(round_rational(estimate), p);
    }
    return total;
}

}  // namespace

CoalitionKnowledge coalition_knowledge(const TranscriptStore& store, const HonestPartition& part,
                                       const Topology& g) {
    CoalitionKnowledge kn;
    kn.part = part;
    kn.k = store.k;
    kn.dim = store.dim;
    kn.iterations = static_cast<int>(store.published.size());
    if (part.corrupted.empty()) return kn;
    if (g.size() != store.n) {
        throw std::invalid_argument("coalition_knowledge: graph does not match transcripts");
    }
    const BigInt& p = store.p;
    const std::size_t width = static_cast<std::size_t>(kn.k) * kn.dim + kn.k;

    for (const auto& comp : g.connected_components(part.honest)) {
        ComponentKnowledge ck;
        ck.members = comp;
        std::vector<char> in_comp(g.size(), 0);
        for (int v : comp) in_comp[v] = 1;
        const long long m_size = static_cast<long long>(comp.size());

        for (int t = 0; t < kn.iterations; ++t) {
            std::vector<BigInt> share_sum =
                store.protocol == "tree" ? tree_component_sum(store, g, comp, t, width)
                                         : flux_component_sum(store, g, part, comp, t, width);

            // Undo the boundary randoms: only the pairwise offsets with
            // corrupted neighbors survive in the component total, and the
            // coalition holds all of them.
            for (int c : part.corrupted) {
                for (const auto& rr : store.nodes[c].randoms) {
                    if (rr.iter != t || !in_comp[rr.peer]) continue;
                    for (std::size_t e = 0; e < width; ++e) {
                        // received r_i^c enters with +, sent r_c^i with -
                        share_sum[e] = mod_p(share_sum[e] + (rr.sent ? -rr.values[e]
                                                                     : rr.values[e]), p);
                    }
                }
            }

            ClusterView view;
            view.sums.assign(kn.k, std::vector<double>(kn.dim, 0.0));
            view.counts.assign(kn.k, 0);
            long long count_total = 0;
            for (int j = 0; j < kn.k; ++j) {
                for (int c = 0; c < kn.dim; ++c) {
                    BigInt lifted =
                        centered_mod(share_sum[static_cast<std::size_t>(j) * kn.dim + c], p);
                    view.sums[j][c] =
                        static_cast<double>(lifted) / static_cast<double>(store.scale);
                }
                BigInt cnt =
                    centered_mod(share_sum[static_cast<std::size_t>(kn.k) * kn.dim + j], p);
                if (cnt % store.scale != 0) {
                    throw std::runtime_error("coalition_knowledge: non-integer cluster count");
                }
                cnt /= store.scale;
                if (cnt < 0 || cnt > m_size) {
                    throw std::runtime_error(
                        "coalition_knowledge: transcript/partition mismatch (count out of range)");
                }
                view.counts[j] = static_cast<long long>(cnt);
                count_total += view.counts[j];
            }
            if (count_total != m_size) {
                throw std::runtime_error(
                    "coalition_knowledge: transcript/partition mismatch (counts do not sum)");
            }
            ck.per_iter.push_back(std::move(view));
        }
        kn.components.push_back(std::move(ck));
    }
    return kn;
}

std::string leak_class_to_string(LeakClass c) {
    switch (c) {
        case LeakClass::Perfect: return "perfect";
        case LeakClass::Bounded: return "bounded";
        case LeakClass::Full: return "full";
    }
    return "?";
}

std::vector<FullEntry> singleton_attack(const CoalitionKnowledge& kn,
                                        const std::vector<Labels>& label_history) {
    std::vector<FullEntry> out;
    for (std::size_t ci = 0; ci < kn.components.size(); ++ci) {
        const auto& comp = kn.components[ci];
        const int iters = static_cast<int>(comp.per_iter.size());

        // Singleton occupancy: a cluster holding one component member
        // discloses that member's value as the cluster sum.
        for (int t = 0; t < iters; ++t) {
            const auto& view = comp.per_iter[t];
            for (int j = 0; j < kn.k; ++j) {
                if (view.counts[j] != 1) continue;
                int who = -1;
                bool unique = true;
                for (int i : comp.members) {
                    if (label_history[t][i] == j) {
                        unique = who < 0;
                        who = i;
                    }
                }
                if (who < 0 || !unique) continue;
                FullEntry fe;
                fe.node = who;
                fe.component = static_cast<int>(ci);
                fe.iter_m = t;
                fe.iter_k = t;
                fe.cluster_from = j;
                fe.value = view.sums[j];
                out.push_back(std::move(fe));
            }
        }

        // Cross-iteration differencing over every pair of iterations.
        for (int m = 0; m < iters; ++m) {
            for (int t = m + 1; t < iters; ++t) {
                const auto& a = comp.per_iter[m];
                const auto& b = comp.per_iter[t];
                int from = -1, to = -1;
                bool clean = true;
                for (int j = 0; j < kn.k && clean; ++j) {
                    long long d = b.counts[j] - a.counts[j];
                    if (d == 0) continue;
                    if (d == -1 && from < 0) {
                        from = j;
                    } else if (d == 1 && to < 0) {
                        to = j;
                    } else {
                        clean = false;
                    }
                }
                if (!clean || from < 0 || to < 0) continue;
                // Departure column and negated arrival column must agree,
                // otherwise more than one node moved.
                std::vector<double> left(kn.dim), entered(kn.dim);
                bool agree = true;
                for (int c = 0; c < kn.dim; ++c) {
                    left[c] = a.sums[from][c] - b.sums[from][c];
                    entered[c] = b.sums[to][c] - a.sums[to][c];
                    if (left[c] != entered[c]) agree = false;
                }
                if (!agree) continue;
                // Attribute only when the label history confirms a single
                // mover; the value itself came from coalition data.
                int who = -1;
                int movers = 0;
                for (int i : comp.members) {
                    if (label_history[m][i] != label_history[t][i]) {
                        ++movers;
                        who = i;
                    }
                }
                if (movers != 1 || label_history[m][who] != from ||
                    label_history[t][who] != to) {
                    continue;
                }
                FullEntry fe;
                fe.node = who;
                fe.component = static_cast<int>(ci);
                fe.iter_m = m;
                fe.iter_k = t;
                fe.cluster_from = from;
                fe.cluster_to = to;
                fe.value = std::move(left);
                out.push_back(std::move(fe));
            }
        }
    }
    return out;
}

LeakageReport leakage_report(const CoalitionKnowledge& kn,
                             const std::vector<Labels>& label_history) {
    std::vector<FullEntry> attack = singleton_attack(kn, label_history);
    std::map<int, FullEntry> full_by_node;
    for (auto& fe : attack) full_by_node.emplace(fe.node, fe);

    LeakageReport report;
    for (std::size_t ci = 0; ci < kn.components.size(); ++ci) {
        const auto& comp = kn.components[ci];
        const long long m_size = static_cast<long long>(comp.members.size());
        bool singleton_event = false;
        for (const auto& view : comp.per_iter) {
            for (long long c : view.counts) singleton_event |= (c == 1);
        }
        bool final_exposed = false;
        if (!comp.per_iter.empty()) {
            for (long long c : comp.per_iter.back().counts) final_exposed |= (c == m_size);
        }
        for (int i : comp.members) {
            NodeLeakage entry;
            entry.node = i;
            entry.component_size = static_cast<int>(m_size);
            entry.final_label_exposed = final_exposed;
            auto it = full_by_node.find(i);
            if (it != full_by_node.end()) {
                entry.cls = LeakClass::Full;
                entry.evidence = it->second;
            } else if (singleton_event) {
                entry.cls = LeakClass::Bounded;
            } else {
                entry.cls = LeakClass::Perfect;
            }
            report.entries.push_back(std::move(entry));
        }
    }
    std::sort(report.entries.begin(), report.entries.end(),
              [](const NodeLeakage& a, const NodeLeakage& b) { return a.node < b.node; });
    return report;
}

std::string LeakageReport::to_text() const {
    std::ostringstream out;
    out.precision(17);
    for (const auto& e : entries) {
        out << "node " << e.node << " class " << leak_class_to_string(e.cls)
            << " component_size " << e.component_size << " final_label_exposed "
            << (e.final_label_exposed ? 1 : 0);
        if (e.evidence) {
            const auto& fe = *e.evidence;
            out << " evidence_iters " << fe.iter_m << "," << fe.iter_k << " clusters "
                << fe.cluster_from << "," << fe.cluster_to << " value ";
            for (std::size_t c = 0; c < fe.value.size(); ++c) {
                if (c) out << ",";
                out << fe.value[c];
            }
        }
        out << "\n";
    }
    return out.str();
}

double same_cluster_probability(int component_size, int k) {
    if (component_size < 1 || k < 1) {
        throw std::invalid_argument("same_cluster_probability: M and k must be >= 1");
    }
    return std::pow(1.0 / static_cast<double>(k), component_size);
}

UniformityTest share_uniformity_test(const std::vector<FieldElement>& samples,
                                     const FieldModulus& p) {
    if (p.p > 101) {
        throw std::invalid_argument("share_uniformity_test: modulus too large for binning");
    }
    const std::size_t bins = static_cast<std::size_t>(p.p);
    if (samples.size() < 100 * bins) {
        throw std::invalid_argument("share_uniformity_test: need at least 100*p samples");
    }
    std::vector<std::size_t> counts(bins, 0);
    for (const auto& s : samples) {
        if (s.modulus() != p.p) {
            throw std::invalid_argument("share_uniformity_test: sample from a different field");
        }
        counts[static_cast<std::size_t>(s.value())]++;
    }
    const double expected = static_cast<double>(samples.size()) / static_cast<double>(bins);
    UniformityTest result;
    for (std::size_t v = 0; v < bins; ++v) {
        double diff = static_cast<double>(counts[v]) - expected;
        result.statistic += diff * diff / expected;
    }
    boost::math::chi_squared dist(static_cast<double>(bins - 1));
    result.threshold = boost::math::quantile(dist, 0.99);
    result.reject = result.statistic > result.threshold;
    return result;
}

}  // namespace secmeans
