#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "secmeans/field.hpp"

namespace secmeans {

using Rational = boost::multiprecision::cpp_rational;

/// One pairwise random exchanged in the additive-randomization step.
/// `sent` distinguishes the direction from this node's point of view.
struct RandomRecord {
    int iter = 0;
    int peer = 0;
    bool sent = false;
    std::vector<BigInt> values;  // one field value per vector entry
};

/// A node's own encoded input vector for one iteration (private state).
struct OwnInputRecord {
    int iter = 0;
    std::vector<BigInt> values;
};

/// A node's own obfuscated share vector s_i^i for one iteration.
struct OwnShareRecord {
    int iter = 0;
    std::vector<BigInt> values;
};

/// One synchronous-consensus message received: the sender's state vector
/// at the given round.
struct SyncMsgRecord {
    int iter = 0;
    int round = 0;
    int from = 0;
    std::vector<Rational> values;
};

/// One gossip pairing this node participated in, with both endpoint
/// states before the averaging.
struct GossipEventRecord {
    int iter = 0;
    long event = 0;
    int partner = 0;
    std::vector<Rational> self_before;
    std::vector<Rational> partner_before;
};

/// One spanning-tree aggregation message (up = partial sum toward the
/// root, down = total broadcast back).
struct TreeMsgRecord {
    int iter = 0;
    int peer = 0;
    bool up = false;
    bool sent = false;
    std::vector<Rational> values;
};

/// Everything one node sends, receives, and privately holds across a run.
/// Append-only while the run executes, immutable afterward.
struct NodeTranscript {
    int node = 0;
    std::vector<RandomRecord> randoms;
    std::vector<OwnInputRecord> own_inputs;
    std::vector<OwnShareRecord> own_shares;
    std::vector<SyncMsgRecord> sync_msgs;
    std::vector<GossipEventRecord> gossip_events;
    std::vector<TreeMsgRecord> tree_msgs;
};

/// Aggregates published to every node after one secure averaging round:
/// the reconstructed field sums (one per vector entry) and the resulting
/// cluster centers.
struct PublishedRecord {
    int iter = 0;
    std::vector<BigInt> field_sums;
    std::vector<double> centers;  // k*d values, cluster-major
};

/// Transcript store for one run: per-node transcripts plus global
/// published data and the run parameters the adversary is granted.
struct TranscriptStore {
    int n = 0;
    int k = 0;
    int dim = 0;
    long scale = 1;
    BigInt p = 0;
    std::string protocol;  // "sync", "gossip" or "tree"
    std::vector<NodeTranscript> nodes;
    std::vector<PublishedRecord> published;
    std::vector<long> rounds_per_iter;

    explicit TranscriptStore(int n_count = 0);

    /// One file per node (length-prefixed records) plus published.txt.
    void save(const std::string& dir) const;
    static TranscriptStore load(const std::string& dir);
};

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

}  // namespace secmeans
