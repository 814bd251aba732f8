#include "secmeans/averaging.hpp"

#include <algorithm>
#include <stdexcept>

#include "secmeans/rng.hpp"

namespace secmeans {

MetropolisWeights metropolis_weights(const Topology& g) {
    if (!g.is_connected()) {
        throw std::invalid_argument("metropolis_weights: graph must be connected");
    }
    MetropolisWeights w;
    w.self.assign(g.size(), Rational(1));
    for (const auto& [i, j] : g.edges()) {
        Rational wij = Rational(1) / (1 + std::max(g.degree(i), g.degree(j)));
        w.edge.emplace(std::make_pair(i, j), wij);
        w.self[i] -= wij;
        w.self[j] -= wij;
    }
    return w;
}

ProtocolKind protocol_kind_from_string(const std::string& s) {
    if (s == "sync") return ProtocolKind::SyncConsensus;
    if (s == "gossip") return ProtocolKind::RandomGossip;
    if (s == "tree") return ProtocolKind::ExactTreeSum;
    throw std::invalid_argument("unknown protocol '" + s + "' (expected sync|gossip|tree)");
}

std::string protocol_kind_to_string(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::SyncConsensus: return "sync";
        case ProtocolKind::RandomGossip: return "gossip";
        case ProtocolKind::ExactTreeSum: return "tree";
    }
    return "?";
}

StateMatrix sync_round(const StateMatrix& state, const MetropolisWeights& w, const Topology& g,
                       TranscriptStore* store, int iter, int round) {
    const int n = g.size();
    StateMatrix next(n);
    for (int i = 0; i < n; ++i) {
        std::vector<Rational> acc = state[i];
        for (auto& v : acc) v *= w.self[i];
        for (int j : g.neighbors(i)) {
            const Rational& wij = w.edge.at({std::min(i, j), std::max(i, j)});
            for (std::size_t e = 0; e < acc.size(); ++e) acc[e] += wij * state[j][e];
            if (store) {
                store->nodes[i].sync_msgs.push_back(SyncMsgRecord{iter, round, j, state[j]});
            }
        }
        next[i] = std::move(acc);
    }
    return next;
}

void gossip_round(StateMatrix& state, const Topology& g, DetRng& rng, TranscriptStore* store,
                  int iter, long event) {
    if (g.edges().empty()) {
        throw std::invalid_argument("gossip_round: graph has no edges");
    }
    const auto& [i, j] =
        g.edges()[rng.uniform_below(static_cast<std::uint64_t>(g.edges().size()))];
    if (store) {
        store->nodes[i].gossip_events.push_back(
            GossipEventRecord{iter, event, j, state[i], state[j]});
        store->nodes[j].gossip_events.push_back(
            GossipEventRecord{iter, event, i, state[j], state[i]});
    }
    for (std::size_t e = 0; e < state[i].size(); ++e) {
        Rational mean = (state[i][e] + state[j][e]) / 2;
        state[i][e] = mean;
        state[j][e] = mean;
    }
}

// Deterministic BFS spanning tree rooted at 0; parent[0] = -1.
std::vector<int> bfs_tree_parents(const Topology& g) {
    std::vector<int> parent(g.size(), -2);
    std::vector<int> order;
    parent[0] = -1;
    order.push_back(0);
    for (std::size_t head = 0; head < order.size(); ++head) {
        int v = order[head];
        for (int w : g.neighbors(v)) {
            if (parent[w] == -2) {
                parent[w] = v;
                order.push_back(w);
            }
        }
    }
    if (order.size() != static_cast<std::size_t>(g.size())) {
        throw std::invalid_argument("tree_sum: graph must be connected");
    }
    return parent;
}

std::vector<Rational> tree_sum(const Topology& g, const StateMatrix& values,
                               TranscriptStore* store, int iter) {
    const int n = g.size();
    std::vector<int> parent = bfs_tree_parents(g);

    // Up pass in reverse BFS order: children report subtree sums.
    std::vector<int> order;
    order.push_back(0);
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (int w : g.neighbors(order[head])) {
            if (parent[w] == order[head]) order.push_back(w);
        }
    }
    StateMatrix up = values;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (parent[v] < 0) continue;
        for (std::size_t e = 0; e < up[v].size(); ++e) up[parent[v]][e] += up[v][e];
        if (store) {
            store->nodes[v].tree_msgs.push_back(TreeMsgRecord{iter, parent[v], true, true, up[v]});
            store->nodes[parent[v]].tree_msgs.push_back(TreeMsgRecord{iter, v, true, false, up[v]});
        }
    }

    // Down pass: root broadcasts the exact mean.
    std::vector<Rational> mean = up[0];
    for (auto& m : mean) m /= n;
    if (store) {
        for (int v : order) {
            if (parent[v] < 0) continue;
            store->nodes[parent[v]].tree_msgs.push_back(
                TreeMsgRecord{iter, v, false, true, mean});
            store->nodes[v].tree_msgs.push_back(TreeMsgRecord{iter, parent[v], false, false, mean});
        }
    }
    return mean;
}

namespace {

// Simulator-side certificate: every entry of every node must round to
// the true sum, i.e. |v*n - S| < 1/2.
bool all_rounded_to_sum(const StateMatrix& state, const std::vector<Rational>& true_sum, int n) {
    for (const auto& row : state) {
        for (std::size_t e = 0; e < row.size(); ++e) {
            Rational err = row[e] * n - true_sum[e];
            if (err < 0) err = -err;
            if (!(2 * err < 1)) return false;
        }
    }
    return true;
}

}  // namespace

AveragingResult run_protocol(const Topology& g, const StateMatrix& init,
                             const ProtocolChoice& choice, TranscriptStore* store, int iter) {
    if (!g.is_connected()) {
        throw std::invalid_argument("run_protocol: graph must be connected");
    }
    const int n = g.size();
    if (static_cast<int>(init.size()) != n) {
        throw std::invalid_argument("run_protocol: one state row per node required");
    }
    const std::size_t width = init.empty() ? 0 : init[0].size();
    std::vector<Rational> true_sum(width, Rational(0));
    for (const auto& row : init) {
        for (std::size_t e = 0; e < width; ++e) true_sum[e] += row[e];
    }

    AveragingResult result;
    switch (choice.kind) {
        case ProtocolKind::ExactTreeSum: {
            std::vector<Rational> mean = tree_sum(g, init, store, iter);
            result.values.assign(n, mean);
            result.rounds = 1;
            result.converged = true;
            break;
        }
        case ProtocolKind::SyncConsensus: {
            MetropolisWeights w = metropolis_weights(g);
            StateMatrix state = init;
            long round = 0;
            bool done = all_rounded_to_sum(state, true_sum, n);
            while (!done && round < choice.budget) {
                state = sync_round(state, w, g, store, iter, static_cast<int>(round));
                ++round;
                done = all_rounded_to_sum(state, true_sum, n);
            }
            result.values = std::move(state);
            result.rounds = round;
            result.converged = done;
            break;
        }
        case ProtocolKind::RandomGossip: {
            if (g.edges().empty() && n > 1) {
                throw std::invalid_argument("run_protocol: gossip needs at least one edge");
            }
            DetRng rng = DetRng::derive(choice.seed,
                                        {0x676f73ULL, static_cast<std::uint64_t>(iter)});
            StateMatrix state = init;
            long event = 0;
            bool done = all_rounded_to_sum(state, true_sum, n);
            while (!done && event < choice.budget) {
                gossip_round(state, g, rng, store, iter, event);
                ++event;
                // The rounding certificate is cheap relative to an event
                // at desk scale; check every pairing.
                done = all_rounded_to_sum(state, true_sum, n);
            }
            result.values = std::move(state);
            result.rounds = event;
            result.converged = done;
            break;
        }
    }
    return result;
}

}  // namespace secmeans
