#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace secmeans {

/// Undirected graph over dense node ids 0..n-1. Immutable after
/// construction; adjacency lists are kept sorted.
class Topology {
public:
    Topology(int n, std::vector<std::pair<int, int>> edges);

    static Topology ring(int n);
    static Topology erdos_renyi(int n, double prob, std::uint64_t seed);
    /// Nodes placed uniformly in the unit square, edge iff distance <= radius.
    static Topology random_geometric(int n, double radius, std::uint64_t seed);

    int size() const { return n_; }
    const std::vector<int>& neighbors(int i) const;
    int degree(int i) const { return static_cast<int>(neighbors(i).size()); }
    bool has_edge(int i, int j) const;
    /// Unordered edges, each once, with i < j, lexicographically sorted.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    bool is_connected() const;
    /// Maximal connected pieces of `subset` using only edges internal to it.
    /// Each piece is sorted; pieces are ordered by smallest member.
    std::vector<std::vector<int>> connected_components(const std::vector<int>& subset) const;

    /// Edge-list text: first line n, then one "i j" per edge.
    std::string to_edge_list() const;
    static Topology from_edge_list(const std::string& text);

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

/// Split of the node set into honest and passively corrupted nodes.
struct HonestPartition {
    std::vector<int> honest;
    std::vector<int> corrupted;

    static HonestPartition from_corrupted(int n, const std::vector<int>& corrupted);
    bool is_corrupted(int i) const;
};

/// For each honest node, whether it has at least one honest neighbor.
/// This is the per-node condition under which its input stays hidden.
std::vector<std::pair<int, bool>> honest_neighbor_condition(const Topology& g,
                                                            const HonestPartition& part);

}  // namespace secmeans
