#pragma once

#include <string>

#include "secmeans/adversary.hpp"
#include "secmeans/config.hpp"
#include "secmeans/kmeans.hpp"

namespace secmeans {

/// Seeded synthetic data per the config's data section. Gaussian-mixture
/// samples are clipped to [-x_max, x_max].
Dataset generate_data(const SimConfig& cfg, std::uint64_t seed);

/// Topology per the config's topology section (ring, random generators or
/// an edge-list file).
Topology build_topology(const SimConfig& cfg);

/// Seeded uniform draws from the data bounding box.
Centers initial_centers(const Dataset& data, int k, std::uint64_t seed);

struct MetricsRecord {
    std::string run_id;
    bool kmeans_converged = false;
    bool averaging_converged = false;
    int iterations = 0;
    long total_rounds = 0;
    bool label_agreement = false;
    double max_center_deviation = 0.0;
    int leak_perfect = 0;
    int leak_bounded = 0;
    int leak_full = 0;

    static std::string csv_header();
    std::string to_csv_row(const SimConfig& cfg) const;
};

/// Executes the secure run, the centralized oracle on the same init, and
/// the adversary analysis, then persists transcripts, centers, labels,
/// the leakage report and metrics under cfg.output_dir. Fully
/// deterministic given the config. Returns false (after persisting a
/// non-converged record) when the averaging budget is exhausted.
bool run_experiment(const SimConfig& cfg, MetricsRecord* out = nullptr);

/// Oracle-only run: persists centers/labels for comparison against `run`.
void run_oracle(const SimConfig& cfg);

/// Offline analysis over a persisted run directory; must reproduce the
/// inline leakage report byte for byte.
LeakageReport analyze_run_dir(const std::string& run_dir, const std::vector<int>& corrupted);

}  // namespace secmeans
