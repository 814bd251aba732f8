#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "secmeans/topology.hpp"
#include "secmeans/transcript.hpp"

namespace secmeans {

/// Per-node state for one averaging run: each node holds a vector of
/// `width` exact rationals. Row i is node i's state.
using StateMatrix = std::vector<std::vector<Rational>>;

/// Metropolis weights: W_ij = 1/(1+max(deg_i,deg_j)) on edges, self
/// weight fills the row to 1. Nonnegative and doubly stochastic, so a
/// sync round conserves the state sum and never widens the spread.
struct MetropolisWeights {
    std::map<std::pair<int, int>, Rational> edge;  // keyed with i < j
    std::vector<Rational> self;
};

MetropolisWeights metropolis_weights(const Topology& g);

enum class ProtocolKind { SyncConsensus, RandomGossip, ExactTreeSum };

struct ProtocolChoice {
    ProtocolKind kind = ProtocolKind::SyncConsensus;
    long budget = 400;       // max rounds (sync) or pairings (gossip)
    std::uint64_t seed = 0;  // gossip edge selection
};

ProtocolKind protocol_kind_from_string(const std::string& s);
std::string protocol_kind_to_string(ProtocolKind k);

/// One synchronous consensus round, x <- Wx with exact rationals.
StateMatrix sync_round(const StateMatrix& state, const MetropolisWeights& w, const Topology& g,
                       TranscriptStore* store = nullptr, int iter = 0, int round = 0);

/// One gossip pairing: a uniformly random edge replaces both endpoint
/// values by their mean. Touches exactly two rows.
void gossip_round(StateMatrix& state, const Topology& g, class DetRng& rng,
                  TranscriptStore* store = nullptr, int iter = 0, long event = 0);

/// Exact mean via BFS spanning-tree aggregation rooted at node 0.
std::vector<Rational> tree_sum(const Topology& g, const StateMatrix& values,
                               TranscriptStore* store = nullptr, int iter = 0);

/// The deterministic BFS spanning tree tree_sum aggregates over;
/// parent[0] == -1. Public because it is derivable from the graph alone,
/// so transcript analysis may reconstruct it.
std::vector<int> bfs_tree_parents(const Topology& g);

struct AveragingResult {
    StateMatrix values;
    long rounds = 0;
    bool converged = false;
};

/// Runs the chosen protocol until every node's value rounds to the true
/// sum (the simulator knows the true sum and certifies this; nodes only
/// see the round budget) or until the budget runs out.
AveragingResult run_protocol(const Topology& g, const StateMatrix& init,
                             const ProtocolChoice& choice, TranscriptStore* store = nullptr,
                             int iter = 0);

}  // namespace secmeans
