#pragma once

#include <optional>
#include <string>
#include <vector>

#include "secmeans/kmeans.hpp"
#include "secmeans/topology.hpp"
#include "secmeans/transcript.hpp"

namespace secmeans {

/// What the coalition knows about one honest component at one iteration:
/// per-cluster sums of member observations and member counts.
struct ClusterView {
    std::vector<std::vector<double>> sums;  // k rows, dim columns
    std::vector<long long> counts;          // k entries, sum to |component|
};

struct ComponentKnowledge {
    std::vector<int> members;  // sorted honest node ids
    std::vector<ClusterView> per_iter;
};

/// The full information set a passive coalition extracts from its own
/// transcripts, the published aggregates and the graph.
struct CoalitionKnowledge {
    HonestPartition part;
    int k = 0;
    int dim = 0;
    int iterations = 0;
    std::vector<ComponentKnowledge> components;
};

/// Derives the per-component, per-cluster honest sums and counts for
/// every iteration. Only coalition-visible data is consumed: corrupted
/// nodes' transcripts, the published reconstructed aggregates and the
/// graph. For the iterative protocols the component totals are pinned
/// down by tracking the exact value flow across honest/corrupt boundary
/// edges and rounding against the published sum.
CoalitionKnowledge coalition_knowledge(const TranscriptStore& store, const HonestPartition& part,
                                       const Topology& g);

enum class LeakClass { Perfect, Bounded, Full };

std::string leak_class_to_string(LeakClass c);

/// Evidence for one fully exposed observation. `iter_m == iter_k` marks a
/// singleton-occupancy exposure, otherwise a cross-iteration single-mover
/// differencing. The recovered value comes from coalition data alone; the
/// node id is attached by the audit from the run's label history.
struct FullEntry {
    int node = -1;
    int component = 0;
    int iter_m = 0;
    int iter_k = 0;
    int cluster_from = -1;
    int cluster_to = -1;
    std::vector<double> value;
};

/// Cross-iteration differencing plus singleton-occupancy scan.
/// Compares every iteration pair; a count difference of exactly one
/// departure and one arrival exposes the mover's value as a column of the
/// sum difference (cross-checked against the negated arrival column).
std::vector<FullEntry> singleton_attack(const CoalitionKnowledge& knowledge,
                                        const std::vector<Labels>& label_history);

struct NodeLeakage {
    int node = 0;
    LeakClass cls = LeakClass::Perfect;
    bool final_label_exposed = false;
    int component_size = 0;  // n_h; the Bounded coefficient is 1/n_h
    std::optional<FullEntry> evidence;
};

struct LeakageReport {
    std::vector<NodeLeakage> entries;  // one per honest node, by id
    std::string to_text() const;
};

/// Classifies every honest node: Full when exposed by the attack,
/// Bounded (coefficient 1/n_h) when its component had any
/// singleton-cluster event during the run, Perfect otherwise. The final
/// label is exposed iff the node's whole component shares one final
/// cluster.
LeakageReport leakage_report(const CoalitionKnowledge& knowledge,
                             const std::vector<Labels>& label_history);

/// Probability that all M nodes of a component land in one cluster under
/// uniform assignment: (1/k)^M.
double same_cluster_probability(int component_size, int k);

struct UniformityTest {
    double statistic = 0.0;
    double threshold = 0.0;  // chi-square 0.99 quantile, p-1 dof
    bool reject = false;
};

/// Chi-square goodness of fit of field samples against uniform [0, p),
/// significance 0.01. Needs at least 100*p samples and small p.
UniformityTest share_uniformity_test(const std::vector<FieldElement>& samples,
                                     const FieldModulus& p);

}  // namespace secmeans
