#include "secmeans/kmeans.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "secmeans/secret_sharing.hpp"

namespace secmeans {

void Dataset::validate() const {
    if (!(x_max > 0)) throw std::invalid_argument("Dataset: x_max must be > 0");
    for (const auto& row : x) {
        if (static_cast<int>(row.size()) != dim()) {
            throw std::invalid_argument("Dataset: inconsistent dimensions");
        }
        for (double v : row) {
            if (!(std::abs(v) <= x_max)) {
                throw std::invalid_argument("Dataset: coordinate exceeds x_max");
            }
        }
    }
}

Dataset Dataset::from_csv(const std::string& text, double x_max) {
    Dataset data;
    data.x_max = x_max;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        data.x.push_back(std::move(row));
    }
    data.validate();
    return data;
}

std::string Dataset::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    for (const auto& row : x) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            out << row[c];
        }
        out << "\n";
    }
    return out.str();
}

int assign_cluster(const std::vector<double>& x, const Centers& centers) {
    if (centers.empty()) throw std::invalid_argument("assign_cluster: no centers");
    int best = 0;
    double best_dist = 0.0;
    for (std::size_t j = 0; j < centers.size(); ++j) {
        double dist = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) {
            double diff = x[c] - centers[j][c];
            dist += diff * diff;
        }
        if (j == 0 || dist < best_dist) {
            best = static_cast<int>(j);
            best_dist = dist;
        }
    }
    return best;
}

ExtendedVectors build_extended(const std::vector<double>& x, int label, int k) {
    if (label < 0 || label >= k) throw std::out_of_range("build_extended: label out of range");
    ExtendedVectors ext;
    ext.y.assign(x.size(), std::vector<double>(k, 0.0));
    ext.e.assign(k, 0.0);
    for (std::size_t c = 0; c < x.size(); ++c) ext.y[c][label] = x[c];
    ext.e[label] = 1.0;
    return ext;
}

FixedPointCodec make_codec(const Dataset& data, int n, long scale) {
    double bound = std::max(data.x_max, 1.0);
    return FixedPointCodec(scale, choose_modulus(n, bound, scale), n, bound);
}

namespace {

// Flattened extended-vector layout: k*dim sum entries (cluster-major)
// followed by k count entries.
std::vector<double> flatten_extended(const std::vector<double>& x, int label, int k) {
    ExtendedVectors ext = build_extended(x, label, k);
    std::vector<double> flat;
    flat.reserve(k * x.size() + k);
    for (int j = 0; j < k; ++j) {
        for (std::size_t c = 0; c < x.size(); ++c) flat.push_back(ext.y[c][j]);
    }
    for (int j = 0; j < k; ++j) flat.push_back(ext.e[j]);
    return flat;
}

}  // namespace

Centers secure_center_update(const Topology& g, const Dataset& data, const Labels& labels,
                             const Centers& prev_centers, const KmeansConfig& cfg,
                             const FixedPointCodec& codec, TranscriptStore* store, int iter,
                             long* rounds_used) {
    const int n = data.size();
    const int dim = data.dim();
    const int k = cfg.k;
    const std::size_t width = static_cast<std::size_t>(k) * dim + k;

    // Step 1: encode and additively randomize every entry in one batch.
    std::vector<std::vector<FieldElement>> inputs(n);
    for (int i = 0; i < n; ++i) {
        for (double v : flatten_extended(data.x[i], labels[i], k)) {
            inputs[i].push_back(codec.encode(v));
        }
    }
    PairwiseRandoms randoms =
        exchange_randoms(g, width, codec.modulus, cfg.master_seed, iter, store);
    ShareSet shares = make_shares(inputs, randoms, g, store, iter);

    // Step 2: distributed averaging of the obfuscated shares.
    StateMatrix init(n);
    for (int i = 0; i < n; ++i) {
        for (const auto& s : shares.own[i]) init[i].emplace_back(s.value());
    }
    AveragingResult avg = run_protocol(g, init, cfg.protocol, store, iter);
    if (rounds_used) *rounds_used = avg.rounds;
    if (!avg.converged) {
        throw std::runtime_error("secure_center_update: averaging did not converge within " +
                                 std::to_string(cfg.protocol.budget) + " rounds at iteration " +
                                 std::to_string(iter));
    }

    // Step 3: every node reconstructs the same field sums.
    std::vector<FieldElement> sums;
    for (std::size_t e = 0; e < width; ++e) {
        sums.push_back(reconstruct_average(avg.values[0][e], n, codec.modulus));
    }

    // Decode per-cluster sums and counts; counts must come back as exact
    // nonnegative integers adding up to n, anything else is a fault.
    std::vector<long long> counts(k);
    long long total = 0;
    for (int j = 0; j < k; ++j) {
        double cnt = codec.decode_sum(sums[static_cast<std::size_t>(k) * dim + j]);
        long long c = std::llround(cnt);
        if (std::abs(cnt - static_cast<double>(c)) > 0 || c < 0) {
            throw std::logic_error("secure_center_update: non-integer cluster count");
        }
        counts[j] = c;
        total += c;
    }
    if (total != n) throw std::logic_error("secure_center_update: cluster counts do not sum to n");

    Centers centers = prev_centers;
    for (int j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;  // empty cluster keeps its center
        for (int c = 0; c < dim; ++c) {
            double sum = codec.decode_sum(sums[static_cast<std::size_t>(j) * dim + c]);
            centers[j][c] = sum / static_cast<double>(counts[j]);
        }
    }

    if (store) {
        PublishedRecord rec;
        rec.iter = iter;
        for (const auto& s : sums) rec.field_sums.push_back(s.value());
        for (const auto& row : centers) {
            for (double v : row) rec.centers.push_back(v);
        }
        store->published.push_back(std::move(rec));
    }
    return centers;
}

namespace {

// Shared iteration loop; the only difference between the secure run and
// the centralized oracle is the center-update callback.
template <typename UpdateFn>
RunResult lloyd_loop(const Dataset& data, const Centers& init_centers, int max_iters,
                     UpdateFn update) {
    RunResult result;
    result.centers = init_centers;
    const int n = data.size();
    for (int t = 0; t < max_iters; ++t) {
        Labels labels(n);
        for (int i = 0; i < n; ++i) labels[i] = assign_cluster(data.x[i], result.centers);
        result.label_history.push_back(labels);
        result.labels = labels;
        result.iterations = t + 1;
        if (t > 0 && labels == result.label_history[t - 1]) {
            result.converged = true;
            break;
        }
        result.centers = update(labels, result.centers, t);
        result.center_history.push_back(result.centers);
    }
    return result;
}

}  // namespace

RunResult run_kmeans(const Topology& g, const Dataset& data, const Centers& init_centers,
                     const KmeansConfig& cfg, TranscriptStore* store) {
    data.validate();
    if (data.size() != g.size()) {
        throw std::invalid_argument("run_kmeans: one observation per node required");
    }
    if (!g.is_connected()) throw std::invalid_argument("run_kmeans: graph must be connected");
    FixedPointCodec codec = make_codec(data, data.size(), cfg.scale);
    if (store) {
        store->k = cfg.k;
        store->dim = data.dim();
        store->scale = cfg.scale;
        store->p = codec.modulus.p;
        store->protocol = protocol_kind_to_string(cfg.protocol.kind);
    }
    std::vector<long> rounds_per_iter;
    RunResult result = lloyd_loop(
        data, init_centers, cfg.max_iters,
        [&](const Labels& labels, const Centers& prev, int t) {
            long rounds = 0;
            Centers next =
                secure_center_update(g, data, labels, prev, cfg, codec, store, t, &rounds);
            rounds_per_iter.push_back(rounds);
            return next;
        });
    result.rounds_per_iter = rounds_per_iter;
    if (store) store->rounds_per_iter = result.rounds_per_iter;
    return result;
}

RunResult centralized_oracle(const Dataset& data, const Centers& init_centers, int max_iters) {
    data.validate();
    const int dim = data.dim();
    return lloyd_loop(data, init_centers, max_iters,
                      [&](const Labels& labels, const Centers& prev, int) {
                          const int k = static_cast<int>(prev.size());
                          Centers next = prev;
                          for (int j = 0; j < k; ++j) {
                              std::vector<double> sum(dim, 0.0);
                              long long count = 0;
                              for (int i = 0; i < data.size(); ++i) {
                                  if (labels[i] != j) continue;
                                  for (int c = 0; c < dim; ++c) sum[c] += data.x[i][c];
                                  ++count;
                              }
                              if (count == 0) continue;
                              for (int c = 0; c < dim; ++c) {
                                  next[j][c] = sum[c] / static_cast<double>(count);
                              }
                          }
                          return next;
                      });
}

}  // namespace secmeans
