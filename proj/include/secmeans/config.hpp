#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace secmeans {

/// Flat key-value run configuration with dotted section keys, e.g.
///   topology.kind = erdos_renyi
///   topology.n = 12
/// Lines starting with '#' are comments.
struct SimConfig {
    // topology
    std::string topology_kind = "ring";  // ring | erdos_renyi | random_geometric | file
    int n = 8;
    double prob = 0.5;
    double radius = 0.5;
    std::uint64_t topology_seed = 0;
    std::string topology_file;

    // clustering
    int k = 2;
    int dim = 1;
    int max_iters = 25;

    // data
    std::string data_kind = "gaussian_mixture";  // gaussian_mixture | uniform_int | file
    std::vector<std::vector<double>> mix_means;  // one row per component
    std::vector<double> mix_stddevs;
    std::vector<double> mix_weights;
    long uniform_int_range = 50;
    double x_max = 100.0;
    std::uint64_t data_seed = 0;
    std::string data_file;

    // codec
    long scale = 1;

    // averaging protocol
    std::string protocol = "tree";  // sync | gossip | tree
    long budget = 400;

    // adversary
    std::vector<int> corrupted;
    double corruption_fraction = 0.0;
    std::uint64_t corruption_seed = 0;

    // run
    std::uint64_t master_seed = 0;
    std::string output_dir = "out";
    std::uint64_t init_seed = 0;

    static SimConfig parse(const std::string& text);
    static SimConfig parse_file(const std::string& path);
    void validate() const;
};

}  // namespace secmeans
