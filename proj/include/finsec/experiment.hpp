//
// Module      : experiment
// Description : batch experiment runner behind the command line tool:
//               flat key-value configs in, deterministic CSV reports out.
//
#ifndef FINSEC_EXPERIMENT_HPP
#define FINSEC_EXPERIMENT_HPP

#include <finsec/seqlab.hpp>
#include <finsec/symbols.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace finsec {

// Exit codes of the runner.
inline constexpr int exit_ok = 0;
inline constexpr int exit_mismatch = 1;
inline constexpr int exit_bad_config = 2;
inline constexpr int exit_numerical = 3;

struct ExperimentConfig {
    std::string experiment;
    std::string out_dir = "out";

    std::string sequence;
    FourierSymbol symbol;
    bool has_symbol = false;
    std::string parity = "all"; // horizon restriction for analyze

    Horizon horizon;
    Thresholds thresholds;

    int cuntz_order = 2;
    int word_len = 3;
    std::uint64_t seed = 1;
    int degree = 4;
    int pairs = 10;
    Index levels = 0;
    std::string chain = "parity-spectrum";
    double bound = 1.0;
    double lambda = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    int lambda_count = 0;
    std::vector<double> eps_grid;
    double tol = 1e-6;
    long alpha = -1; // stabilize: -1 = take it from the Fredholm classifier
    int kernel_dim = 1;
    bool plot = false; // emit gnuplot-ready two-column data files

    // Declared expectations; unset sentinels keep the runner permissive.
    std::string expect_classification;
    long expect_alpha = -2;
    long expect_ess_rank = -2; // -1 means "infinite"
    int expect_pass = -1;
    std::string expect_class;
    int expect_no_mixed = -1;
    long expect_min_indices = -2;
    long expect_odd_count = -2;
    long expect_even_count = -2;
};

struct RunOptions {
    std::string out_override;
    Index max_dimension = 4096;
    int threads = 1;
};

/// Parses a flat key-value config. Unknown keys, malformed values, and
/// keys that do not belong to the declared experiment raise ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Runs one experiment and writes its reports under the output directory.
/// Returns an exit code; never throws.
int run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// 17-significant-digit decimal form used in every report.
std::string format_number(double v);

} // namespace finsec

#endif
