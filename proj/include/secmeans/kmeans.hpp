#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "secmeans/averaging.hpp"
#include "secmeans/field.hpp"
#include "secmeans/topology.hpp"
#include "secmeans/transcript.hpp"

namespace secmeans {

/// One observation per node, all coordinates bounded by x_max.
struct Dataset {
    std::vector<std::vector<double>> x;  // n rows, dim columns
    double x_max = 0.0;

    int size() const { return static_cast<int>(x.size()); }
    int dim() const { return x.empty() ? 0 : static_cast<int>(x[0].size()); }
    void validate() const;

    /// CSV-like text: one row per node, dim decimal columns.
    static Dataset from_csv(const std::string& text, double x_max);
    std::string to_csv() const;
};

using Centers = std::vector<std::vector<double>>;  // k rows, dim columns
using Labels = std::vector<int>;

/// x_i placed in column l of a d x k matrix plus a one-hot indicator, so
/// that network averages give per-cluster sums and counts at once.
struct ExtendedVectors {
    std::vector<std::vector<double>> y;  // dim rows, k columns
    std::vector<double> e;               // length k
};

/// argmin over squared Euclidean distance, ties to the smallest index.
int assign_cluster(const std::vector<double>& x, const Centers& centers);

ExtendedVectors build_extended(const std::vector<double>& x, int label, int k);

struct KmeansConfig {
    int k = 2;
    int max_iters = 20;
    long scale = 1;
    ProtocolChoice protocol;
    std::uint64_t master_seed = 0;
};

struct RunResult {
    Centers centers;
    Labels labels;
    int iterations = 0;
    bool converged = false;
    std::vector<Labels> label_history;    // one entry per iteration
    std::vector<Centers> center_history;  // centers after each update
    std::vector<long> rounds_per_iter;    // averaging rounds per update
};

/// One secure center update: encode the extended vectors, randomize,
/// average with the configured protocol, reconstruct and decode.
/// Clusters that end up empty keep their previous center.
Centers secure_center_update(const Topology& g, const Dataset& data, const Labels& labels,
                             const Centers& prev_centers, const KmeansConfig& cfg,
                             const FixedPointCodec& codec, TranscriptStore* store, int iter,
                             long* rounds_used = nullptr);

/// The full secure iteration loop. Stops when labels repeat between
/// consecutive iterations or after max_iters.
RunResult run_kmeans(const Topology& g, const Dataset& data, const Centers& init_centers,
                     const KmeansConfig& cfg, TranscriptStore* store = nullptr);

/// Plain Lloyd iteration with the identical tie-break and empty-cluster
/// rules; the ground truth the secure run must match.
RunResult centralized_oracle(const Dataset& data, const Centers& init_centers, int max_iters);

/// Codec sized for this run: bound covers both coordinates and the
/// one-hot indicator entries.
FixedPointCodec make_codec(const Dataset& data, int n, long scale);

}  // namespace secmeans
