#include "secmeans/topology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "secmeans/rng.hpp"

namespace secmeans {

Topology::Topology(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 1) throw std::invalid_argument("Topology: n must be >= 1");
    adj_.resize(n);
    for (auto& [i, j] : edges) {
        if (i == j) throw std::invalid_argument("Topology: self-loop rejected");
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw std::invalid_argument("Topology: edge endpoint out of range");
        }
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    for (const auto& [i, j] : edges_) {
        adj_[i].push_back(j);
        adj_[j].push_back(i);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

Topology Topology::ring(int n) {
    std::vector<std::pair<int, int>> edges;
    if (n == 2) {
        edges.push_back({0, 1});
    } else if (n > 2) {
        for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    }
    return Topology(n, std::move(edges));
}

Topology Topology::erdos_renyi(int n, double prob, std::uint64_t seed) {
    if (prob < 0.0 || prob > 1.0) throw std::invalid_argument("erdos_renyi: prob outside [0,1]");
    DetRng rng = DetRng::derive(seed, {0x4552u});  // "ER"
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform01() < prob) edges.push_back({i, j});
        }
    }
    return Topology(n, std::move(edges));
}

Topology Topology::random_geometric(int n, double radius, std::uint64_t seed) {
    if (!(radius > 0.0)) throw std::invalid_argument("random_geometric: radius must be > 0");
    DetRng rng = DetRng::derive(seed, {0x5247u});  // "RG"
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = rng.uniform01();
        ys[i] = rng.uniform01();
    }
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dx = xs[i] - xs[j];
            double dy = ys[i] - ys[j];
            if (std::sqrt(dx * dx + dy * dy) <= radius) edges.push_back({i, j});
        }
    }
    return Topology(n, std::move(edges));
}

const std::vector<int>& Topology::neighbors(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("Topology::neighbors: invalid node id");
    return adj_[i];
}

bool Topology::has_edge(int i, int j) const {
    const auto& a = neighbors(i);
    return std::binary_search(a.begin(), a.end(), j);
}

bool Topology::is_connected() const {
    std::vector<int> all(n_);
    for (int i = 0; i < n_; ++i) all[i] = i;
    return connected_components(all).size() == 1;
}

std::vector<std::vector<int>> Topology::connected_components(
    const std::vector<int>& subset) const {
    std::vector<char> in_subset(n_, 0), seen(n_, 0);
    for (int v : subset) {
        if (v < 0 || v >= n_) throw std::out_of_range("connected_components: node out of range");
        in_subset[v] = 1;
    }
    std::vector<int> sorted_subset = subset;
    std::sort(sorted_subset.begin(), sorted_subset.end());
    std::vector<std::vector<int>> components;
    for (int start : sorted_subset) {
        if (seen[start]) continue;
        std::vector<int> comp;
        std::queue<int> q;
        q.push(start);
        seen[start] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            comp.push_back(v);
            for (int w : adj_[v]) {
                if (in_subset[w] && !seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

std::string Topology::to_edge_list() const {
    std::ostringstream out;
    out << n_ << "\n";
    for (const auto& [i, j] : edges_) out << i << " " << j << "\n";
    return out.str();
}

Topology Topology::from_edge_list(const std::string& text) {
    std::istringstream in(text);
    int n;
    if (!(in >> n)) throw std::invalid_argument("edge list: missing node count");
    std::vector<std::pair<int, int>> edges;
    int i, j;
    while (in >> i >> j) edges.push_back({i, j});
    return Topology(n, std::move(edges));
}

HonestPartition HonestPartition::from_corrupted(int n, const std::vector<int>& corrupted) {
    std::vector<char> bad(n, 0);
    for (int c : corrupted) {
        if (c < 0 || c >= n) throw std::invalid_argument("HonestPartition: corrupted id out of range");
        bad[c] = 1;
    }
    HonestPartition part;
    for (int v = 0; v < n; ++v) (bad[v] ? part.corrupted : part.honest).push_back(v);
    return part;
}

bool HonestPartition::is_corrupted(int i) const {
    return std::binary_search(corrupted.begin(), corrupted.end(), i);
}

std::vector<std::pair<int, bool>> honest_neighbor_condition(const Topology& g,
                                                            const HonestPartition& part) {
    std::vector<std::pair<int, bool>> out;
    for (int i : part.honest) {
        bool ok = false;
        for (int j : g.neighbors(i)) {
            if (!part.is_corrupted(j)) {
                ok = true;
                break;
            }
        }
        out.push_back({i, ok});
    }
    return out;
}

}  // namespace secmeans
