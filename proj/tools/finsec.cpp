//
// finsec: batch experiment runner. Reads a flat key-value config, builds
// the requested matrix sequences, runs the classifiers and identity
// checkers, and writes deterministic CSV reports.
//
#include <finsec/experiment.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"finite-section spectral laboratory"};
    std::string config_path;
    std::string out_dir;
    long long max_n = 4096;
    int threads = 1;
    app.add_option("config", config_path, "experiment config file")->required();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--max-n", max_n, "cap on matrix dimensions");
    app.add_option("--threads", threads, "worker threads for per-n matrix work");
    CLI11_PARSE(app, argc, argv);

    if (max_n < 1 || threads < 1) {
        std::cerr << "config error: --max-n and --threads must be positive\n";
        return finsec::exit_bad_config;
    }

    finsec::ExperimentConfig config;
    try {
        config = finsec::parse_config_file(config_path);
    } catch (const finsec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return finsec::exit_bad_config;
    }

    finsec::RunOptions options;
    options.out_override = out_dir;
    options.max_dimension = max_n;
    options.threads = threads;
    return finsec::run_experiment(config, options);
}
