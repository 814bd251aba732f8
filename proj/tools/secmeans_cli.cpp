// Command-line front end: run experiments, compare against the
// centralized oracle, analyze persisted transcripts, generate data.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "secmeans/experiment.hpp"

namespace fs = std::filesystem;
using namespace secmeans;

namespace {

std::string default_output_dir() {
    const char* env = std::getenv("SECMEANS_OUTPUT_DIR");
    return env ? env : "";
}

int cmd_run(const std::string& config_path, const std::string& output_override) {
    SimConfig cfg = SimConfig::parse_file(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    else if (!default_output_dir().empty()) cfg.output_dir = default_output_dir();
    MetricsRecord metrics;
    bool ok = run_experiment(cfg, &metrics);
    std::cout << MetricsRecord::csv_header() << "\n" << metrics.to_csv_row(cfg) << "\n";
    if (!ok) {
        std::cerr << "run: averaging did not converge (see " << cfg.output_dir
                  << "/failure.txt)\n";
        return 2;
    }
    return 0;
}

int cmd_oracle(const std::string& config_path, const std::string& output_override) {
    SimConfig cfg = SimConfig::parse_file(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    run_oracle(cfg);
    std::cout << "oracle outputs written to " << cfg.output_dir << "\n";
    return 0;
}

int cmd_analyze(const std::string& run_dir, const std::vector<int>& corrupted,
                const std::string& out_file) {
    LeakageReport report = analyze_run_dir(run_dir, corrupted);
    if (!out_file.empty()) {
        std::ofstream out(out_file, std::ios::binary);
        out << report.to_text();
    } else {
        std::cout << report.to_text();
    }
    return 0;
}

int cmd_gen_data(const std::string& config_path, const std::string& out_file) {
    SimConfig cfg = SimConfig::parse_file(config_path);
    Dataset data = generate_data(cfg, cfg.data_seed ? cfg.data_seed : cfg.master_seed);
    std::ofstream out(out_file, std::ios::binary);
    if (!out) throw std::invalid_argument("gen-data: cannot write " + out_file);
    out << data.to_csv();
    return 0;
}

int cmd_sweep(const std::string& config_path, int trials) {
    SimConfig base = SimConfig::parse_file(config_path);
    fs::path root(base.output_dir);
    fs::create_directories(root);
    std::ofstream summary(root / "sweep_metrics.csv", std::ios::binary);
    summary << MetricsRecord::csv_header() << "\n";
    int failures = 0;
    for (int trial = 0; trial < trials; ++trial) {
        SimConfig cfg = base;
        cfg.master_seed = base.master_seed + static_cast<std::uint64_t>(trial);
        cfg.output_dir = (root / ("trial_" + std::to_string(trial))).string();
        MetricsRecord metrics;
        if (!run_experiment(cfg, &metrics)) ++failures;
        summary << metrics.to_csv_row(cfg) << "\n";
    }
    std::cout << "sweep: " << trials << " trials, " << failures << " failures\n";
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trustworthy distributed k-means simulator"};
    app.require_subcommand(1);

    std::string config_path, output_dir, run_dir, out_file;
    std::vector<int> corrupted;
    int trials = 10;

    auto* run = app.add_subcommand("run", "secure run + oracle + adversary analysis");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("-o,--output", output_dir, "override run.output_dir");

    auto* oracle = app.add_subcommand("oracle", "centralized oracle only");
    oracle->add_option("config", config_path, "config file")->required();
    oracle->add_option("-o,--output", output_dir, "override run.output_dir");

    auto* analyze = app.add_subcommand("analyze", "leakage analysis over persisted transcripts");
    analyze->add_option("run_dir", run_dir, "run output directory")->required();
    analyze->add_option("--corrupted", corrupted, "corrupted node ids")->required();
    analyze->add_option("-o,--output", out_file, "write report here instead of stdout");

    auto* gen = app.add_subcommand("gen-data", "generate a dataset CSV from a config");
    gen->add_option("config", config_path, "config file")->required();
    gen->add_option("-o,--output", out_file, "output CSV path")->required();

    auto* sweep = app.add_subcommand("sweep", "repeat run over consecutive master seeds");
    sweep->add_option("config", config_path, "config file")->required();
    sweep->add_option("--trials", trials, "number of trials")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, output_dir);
        if (oracle->parsed()) return cmd_oracle(config_path, output_dir);
        if (analyze->parsed()) return cmd_analyze(run_dir, corrupted, out_file);
        if (gen->parsed()) return cmd_gen_data(config_path, out_file);
        if (sweep->parsed()) return cmd_sweep(config_path, trials);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
