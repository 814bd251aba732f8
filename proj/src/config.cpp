#include "secmeans/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace secmeans {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const std::string& s, char sep = ',') {
    std::vector<double> out;
    std::istringstream in(s);
    std::string cell;
    while (std::getline(in, cell, sep)) {
        cell = trim(cell);
        if (!cell.empty()) out.push_back(std::stod(cell));
    }
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::istringstream in(s);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        cell = trim(cell);
        if (!cell.empty()) out.push_back(std::stoi(cell));
    }
    return out;
}

}  // namespace

SimConfig SimConfig::parse(const std::string& text) {
    SimConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected key = value, got '" + line + "'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "topology.kind") cfg.topology_kind = value;
        else if (key == "topology.n") cfg.n = std::stoi(value);
        else if (key == "topology.prob") cfg.prob = std::stod(value);
        else if (key == "topology.radius") cfg.radius = std::stod(value);
        else if (key == "topology.seed") cfg.topology_seed = std::stoull(value);
        else if (key == "topology.file") cfg.topology_file = value;
        else if (key == "kmeans.k") cfg.k = std::stoi(value);
        else if (key == "kmeans.d") cfg.dim = std::stoi(value);
        else if (key == "kmeans.T") cfg.max_iters = std::stoi(value);
        else if (key == "data.kind") cfg.data_kind = value;
        else if (key == "data.means") {
            cfg.mix_means.clear();
            std::istringstream comps(value);
            std::string comp;
            while (std::getline(comps, comp, ';')) cfg.mix_means.push_back(parse_doubles(comp));
        } else if (key == "data.stddevs") cfg.mix_stddevs = parse_doubles(value);
        else if (key == "data.weights") cfg.mix_weights = parse_doubles(value);
        else if (key == "data.range") cfg.uniform_int_range = std::stol(value);
        else if (key == "data.x_max") cfg.x_max = std::stod(value);
        else if (key == "data.seed") cfg.data_seed = std::stoull(value);
        else if (key == "data.file") cfg.data_file = value;
        else if (key == "codec.scale") cfg.scale = std::stol(value);
        else if (key == "protocol.kind") cfg.protocol = value;
        else if (key == "protocol.budget") cfg.budget = std::stol(value);
        else if (key == "adversary.corrupted") cfg.corrupted = parse_ints(value);
        else if (key == "adversary.fraction") cfg.corruption_fraction = std::stod(value);
        else if (key == "adversary.seed") cfg.corruption_seed = std::stoull(value);
        else if (key == "run.master_seed") cfg.master_seed = std::stoull(value);
        else if (key == "run.output_dir") cfg.output_dir = value;
        else if (key == "run.init_seed") cfg.init_seed = std::stoull(value);
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

SimConfig SimConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void SimConfig::validate() const {
    if (n < 1) throw std::invalid_argument("config: topology.n must be >= 1");
    if (k < 1) throw std::invalid_argument("config: kmeans.k must be >= 1");
    if (dim < 1) throw std::invalid_argument("config: kmeans.d must be >= 1");
    if (max_iters < 0) throw std::invalid_argument("config: kmeans.T must be >= 0");
    if (scale < 1) throw std::invalid_argument("config: codec.scale must be >= 1");
    if (!(x_max > 0)) throw std::invalid_argument("config: data.x_max must be > 0");
    if (corruption_fraction < 0 || corruption_fraction > 1) {
        throw std::invalid_argument("config: adversary.fraction outside [0,1]");
    }
    for (int c : corrupted) {
        if (c < 0 || c >= n) throw std::invalid_argument("config: corrupted id out of range");
    }
    if (data_kind == "gaussian_mixture" && !mix_weights.empty()) {
        double total = 0;
        for (double w : mix_weights) total += w;
        if (std::abs(total - 1.0) > 1e-9) {
            throw std::invalid_argument("config: data.weights must sum to 1");
        }
    }
}

}  // namespace secmeans
