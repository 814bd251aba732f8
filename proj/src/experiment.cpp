#include "secmeans/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "secmeans/rng.hpp"

namespace secmeans {

namespace fs = std::filesystem;

Dataset generate_data(const SimConfig& cfg, std::uint64_t seed) {
    Dataset data;
    data.x_max = cfg.x_max;
    if (cfg.data_kind == "file") {
        std::ifstream in(cfg.data_file);
        if (!in) throw std::invalid_argument("generate_data: cannot open " + cfg.data_file);
        std::ostringstream buf;
        buf << in.rdbuf();
        return Dataset::from_csv(buf.str(), cfg.x_max);
    }
    if (cfg.data_kind == "uniform_int") {
        DetRng rng = DetRng::derive(seed, {0x64617461ULL});
        long range = cfg.uniform_int_range;
        if (range > static_cast<long>(cfg.x_max)) {
            throw std::invalid_argument("generate_data: data.range exceeds x_max");
        }
        for (int i = 0; i < cfg.n; ++i) {
            std::vector<double> row(cfg.dim);
            for (auto& v : row) {
                v = static_cast<double>(
                    static_cast<long>(rng.uniform_below(static_cast<std::uint64_t>(2 * range + 1))) -
                    range);
            }
            data.x.push_back(std::move(row));
        }
        data.validate();
        return data;
    }
    if (cfg.data_kind == "gaussian_mixture") {
        if (cfg.mix_means.empty()) {
            throw std::invalid_argument("generate_data: gaussian_mixture needs data.means");
        }
        const std::size_t comps = cfg.mix_means.size();
        std::vector<double> weights = cfg.mix_weights;
        if (weights.empty()) weights.assign(comps, 1.0 / static_cast<double>(comps));
        if (weights.size() != comps || cfg.mix_stddevs.size() != comps) {
            throw std::invalid_argument("generate_data: means/stddevs/weights sizes differ");
        }
        for (const auto& m : cfg.mix_means) {
            if (static_cast<int>(m.size()) != cfg.dim) {
                throw std::invalid_argument("generate_data: component mean has wrong dimension");
            }
        }
        DetRng rng = DetRng::derive(seed, {0x64617461ULL});
        for (int i = 0; i < cfg.n; ++i) {
            double u = rng.uniform01();
            std::size_t comp = 0;
            double acc = 0.0;
            for (std::size_t c = 0; c < comps; ++c) {
                acc += weights[c];
                if (u < acc) {
                    comp = c;
                    break;
                }
                comp = c;
            }
            std::vector<double> row(cfg.dim);
            for (int c = 0; c < cfg.dim; ++c) {
                double v = cfg.mix_means[comp][c] + cfg.mix_stddevs[comp] * rng.normal();
                row[c] = std::clamp(v, -cfg.x_max, cfg.x_max);
            }
            data.x.push_back(std::move(row));
        }
        data.validate();
        return data;
    }
    throw std::invalid_argument("generate_data: unknown data.kind '" + cfg.data_kind + "'");
}

Topology build_topology(const SimConfig& cfg) {
    if (cfg.topology_kind == "ring") return Topology::ring(cfg.n);
    if (cfg.topology_kind == "erdos_renyi") {
        return Topology::erdos_renyi(cfg.n, cfg.prob, cfg.topology_seed);
    }
    if (cfg.topology_kind == "random_geometric") {
        return Topology::random_geometric(cfg.n, cfg.radius, cfg.topology_seed);
    }
    if (cfg.topology_kind == "file") {
        std::ifstream in(cfg.topology_file);
        if (!in) throw std::invalid_argument("build_topology: cannot open " + cfg.topology_file);
        std::ostringstream buf;
        buf << in.rdbuf();
        return Topology::from_edge_list(buf.str());
    }
    throw std::invalid_argument("build_topology: unknown topology.kind '" + cfg.topology_kind +
                                "'");
}

Centers initial_centers(const Dataset& data, int k, std::uint64_t seed) {
    double lo = 0.0, hi = 0.0;
    for (const auto& row : data.x) {
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi <= lo) hi = lo + 1.0;
    DetRng rng = DetRng::derive(seed, {0x696e6974ULL});
    Centers centers(k, std::vector<double>(data.dim()));
    for (auto& c : centers) {
        for (auto& v : c) v = lo + (hi - lo) * rng.uniform01();
    }
    return centers;
}

namespace {

std::vector<int> resolve_corrupted(const SimConfig& cfg) {
    if (!cfg.corrupted.empty()) {
        std::vector<int> ids = cfg.corrupted;
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }
    if (cfg.corruption_fraction <= 0.0) return {};
    // Seeded sample of floor(fraction*n) distinct nodes.
    int want = static_cast<int>(cfg.corruption_fraction * cfg.n);
    DetRng rng = DetRng::derive(cfg.corruption_seed, {0x636f7272ULL});
    std::vector<int> pool(cfg.n);
    for (int i = 0; i < cfg.n; ++i) pool[i] = i;
    std::vector<int> ids;
    for (int j = 0; j < want && !pool.empty(); ++j) {
        std::size_t pick = rng.uniform_below(static_cast<std::uint64_t>(pool.size()));
        ids.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<long>(pick));
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string centers_to_text(const Centers& centers) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& row : centers) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            out << row[c];
        }
        out << "\n";
    }
    return out.str();
}

std::string labels_to_text(const Labels& labels) {
    std::ostringstream out;
    for (int l : labels) out << l << "\n";
    return out.str();
}

std::string label_history_to_text(const std::vector<Labels>& history) {
    std::ostringstream out;
    for (const auto& labels : history) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (i) out << ",";
            out << labels[i];
        }
        out << "\n";
    }
    return out.str();
}

std::vector<Labels> label_history_from_text(const std::string& text) {
    std::vector<Labels> history;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Labels labels;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) labels.push_back(std::stoi(cell));
        history.push_back(std::move(labels));
    }
    return history;
}

}  // namespace

std::string MetricsRecord::csv_header() {
    return "run_id,n,k,d,protocol,kmeans_converged,averaging_converged,iterations,total_rounds,"
           "label_agreement,max_center_deviation,leak_perfect,leak_bounded,leak_full";
}

std::string MetricsRecord::to_csv_row(const SimConfig& cfg) const {
    std::ostringstream out;
    out.precision(17);
    out << run_id << "," << cfg.n << "," << cfg.k << "," << cfg.dim << "," << cfg.protocol << ","
        << kmeans_converged << "," << averaging_converged << "," << iterations << ","
        << total_rounds << "," << label_agreement << "," << max_center_deviation << ","
        << leak_perfect << "," << leak_bounded << "," << leak_full;
    return out.str();
}

bool run_experiment(const SimConfig& cfg, MetricsRecord* out) {
    cfg.validate();
    Topology g = build_topology(cfg);
    if (!g.is_connected()) {
        throw std::invalid_argument("run_experiment: generated topology is disconnected");
    }
    Dataset data = generate_data(cfg, cfg.data_seed ? cfg.data_seed : cfg.master_seed);
    Centers init = initial_centers(data, cfg.k, cfg.init_seed ? cfg.init_seed : cfg.master_seed);
    std::vector<int> corrupted = resolve_corrupted(cfg);
    HonestPartition part = HonestPartition::from_corrupted(cfg.n, corrupted);

    KmeansConfig kcfg;
    kcfg.k = cfg.k;
    kcfg.max_iters = cfg.max_iters;
    kcfg.scale = cfg.scale;
    kcfg.protocol.kind = protocol_kind_from_string(cfg.protocol);
    kcfg.protocol.budget = cfg.budget;
    kcfg.protocol.seed = cfg.master_seed;
    kcfg.master_seed = cfg.master_seed;

    fs::create_directories(cfg.output_dir);
    MetricsRecord metrics;
    metrics.run_id = "seed" + std::to_string(cfg.master_seed);

    TranscriptStore store(cfg.n);
    RunResult secure;
    bool averaging_failed = false;
    std::string failure_reason;
    try {
        secure = run_kmeans(g, data, init, kcfg, &store);
        metrics.averaging_converged = true;
    } catch (const std::runtime_error& err) {
        averaging_failed = true;
        failure_reason = err.what();
    }

    RunResult oracle = centralized_oracle(data, init, cfg.max_iters);

    fs::path dir(cfg.output_dir);
    write_file(dir / "graph.txt", g.to_edge_list());
    write_file(dir / "dataset.csv", data.to_csv());
    write_file(dir / "oracle_centers.txt", centers_to_text(oracle.centers));
    write_file(dir / "oracle_labels.txt", labels_to_text(oracle.labels));

    if (!averaging_failed) {
        metrics.kmeans_converged = secure.converged;
        metrics.iterations = secure.iterations;
        for (long r : secure.rounds_per_iter) metrics.total_rounds += r;
        metrics.label_agreement = secure.label_history == oracle.label_history;
        for (std::size_t j = 0; j < secure.centers.size(); ++j) {
            for (std::size_t c = 0; c < secure.centers[j].size(); ++c) {
                metrics.max_center_deviation = std::max(
                    metrics.max_center_deviation,
                    std::abs(secure.centers[j][c] - oracle.centers[j][c]));
            }
        }
        write_file(dir / "centers.txt", centers_to_text(secure.centers));
        write_file(dir / "labels.txt", labels_to_text(secure.labels));
        write_file(dir / "label_history.txt", label_history_to_text(secure.label_history));
        store.save((dir / "transcripts").string());

        CoalitionKnowledge knowledge = coalition_knowledge(store, part, g);
        LeakageReport report = leakage_report(knowledge, secure.label_history);
        write_file(dir / "leakage.txt", report.to_text());
        for (const auto& e : report.entries) {
            if (e.cls == LeakClass::Perfect) ++metrics.leak_perfect;
            if (e.cls == LeakClass::Bounded) ++metrics.leak_bounded;
            if (e.cls == LeakClass::Full) ++metrics.leak_full;
        }
    } else {
        write_file(dir / "failure.txt", failure_reason + "\n");
    }

    std::ostringstream details;
    details.precision(17);
    details << "run_id " << metrics.run_id << "\n"
            << "protocol " << cfg.protocol << "\n"
            << "averaging_converged " << metrics.averaging_converged << "\n"
            << "kmeans_converged " << metrics.kmeans_converged << "\n"
            << "iterations " << metrics.iterations << "\n"
            << "label_agreement " << metrics.label_agreement << "\n"
            << "max_center_deviation " << metrics.max_center_deviation << "\n"
            << "corrupted";
    for (int c : corrupted) details << " " << c;
    details << "\n";
    if (!averaging_failed) {
        details << "center_trajectory\n";
        for (const auto& centers : secure.center_history) details << centers_to_text(centers);
    }
    write_file(dir / "details.txt", details.str());
    write_file(dir / "metrics.csv",
               MetricsRecord::csv_header() + "\n" + metrics.to_csv_row(cfg) + "\n");

    if (out) *out = metrics;
    return !averaging_failed;
}

void run_oracle(const SimConfig& cfg) {
    cfg.validate();
    Dataset data = generate_data(cfg, cfg.data_seed ? cfg.data_seed : cfg.master_seed);
    Centers init = initial_centers(data, cfg.k, cfg.init_seed ? cfg.init_seed : cfg.master_seed);
    RunResult oracle = centralized_oracle(data, init, cfg.max_iters);
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_file(dir / "centers.txt", centers_to_text(oracle.centers));
    write_file(dir / "labels.txt", labels_to_text(oracle.labels));
    write_file(dir / "label_history.txt", label_history_to_text(oracle.label_history));
}

LeakageReport analyze_run_dir(const std::string& run_dir, const std::vector<int>& corrupted) {
    fs::path dir(run_dir);
    TranscriptStore store = TranscriptStore::load((dir / "transcripts").string());
    std::ifstream gin(dir / "graph.txt");
    if (!gin) throw std::invalid_argument("analyze: missing graph.txt in " + run_dir);
    std::ostringstream gbuf;
    gbuf << gin.rdbuf();
    Topology g = Topology::from_edge_list(gbuf.str());
    std::ifstream lin(dir / "label_history.txt");
    if (!lin) throw std::invalid_argument("analyze: missing label_history.txt in " + run_dir);
    std::ostringstream lbuf;
    lbuf << lin.rdbuf();
    std::vector<Labels> history = label_history_from_text(lbuf.str());

    HonestPartition part = HonestPartition::from_corrupted(store.n, corrupted);
    CoalitionKnowledge knowledge = coalition_knowledge(store, part, g);
    return leakage_report(knowledge, history);
}

}  // namespace secmeans
