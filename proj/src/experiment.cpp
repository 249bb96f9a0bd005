#include <finsec/experiment.hpp>

#include <finsec/identities.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace finsec {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

// --- config parsing ---------------------------------------------------------

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "config key '" + key + "': cannot parse number '" +
                                   value + "'");
    }
}

long long parse_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "config key '" + key + "': cannot parse integer '" +
                                   value + "'");
    }
}

// Symbol literal: whitespace-separated (k,re,im) triples.
FourierSymbol parse_symbol(const std::string& key, const std::string& value) {
    FourierSymbol a;
    std::size_t pos = 0;
    bool any = false;
    while (pos < value.size()) {
        while (pos < value.size() && (value[pos] == ' ' || value[pos] == ';' ||
                                      value[pos] == '\t')) {
            ++pos;
        }
        if (pos >= value.size()) break;
        if (value[pos] != '(') {
            throw ConfigError(key, "config key '" + key + "': expected '(' in '" +
                                       value + "'");
        }
        const auto close = value.find(')', pos);
        if (close == std::string::npos) {
            throw ConfigError(key, "config key '" + key + "': missing ')'");
        }
        std::string triple = value.substr(pos + 1, close - pos - 1);
        std::replace(triple.begin(), triple.end(), ',', ' ');
        std::istringstream ts(triple);
        long long k = 0;
        double re = 0.0, im = 0.0;
        if (!(ts >> k >> re >> im)) {
            throw ConfigError(key, "config key '" + key + "': bad triple '(" +
                                       value.substr(pos + 1, close - pos - 1) + ")'");
        }
        std::string rest;
        if (ts >> rest) {
            throw ConfigError(key, "config key '" + key + "': extra field in triple");
        }
        a.add(static_cast<int>(k), Complex(re, im));
        any = true;
        pos = close + 1;
    }
    if (!any) {
        throw ConfigError(key, "config key '" + key + "': no (k,re,im) triples");
    }
    return a;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
    std::vector<double> out;
    std::istringstream is(value);
    std::string tok;
    while (is >> tok) out.push_back(parse_double(key, tok));
    if (out.empty()) {
        throw ConfigError(key, "config key '" + key + "': empty list");
    }
    return out;
}

const std::set<std::string> common_keys = {
    "experiment", "out", "n_min", "n_max", "step", "tau_zero", "tau_gap",
    "tau_stab", "epsilon", "tail", "probe_depth", "growth_min"};

const std::map<std::string, std::set<std::string>> experiment_keys = {
    {"analyze",
     {"sequence", "symbol", "N", "parity", "plot", "expect_classification",
      "expect_alpha", "expect_ess_rank"}},
    {"interlace", {"chain", "levels", "seed", "bound", "expect_pass"}},
    {"cuntz", {"N", "word_len", "expect_pass"}},
    {"widom", {"seed", "degree", "pairs", "expect_pass"}},
    {"arveson", {"lambda", "eps_grid", "plot", "expect_class"}},
    {"essential-scan",
     {"sequence", "symbol", "N", "lambda_min", "lambda_max", "lambda_count",
      "eps_grid", "expect_no_mixed"}},
    {"restrict", {"sequence", "symbol", "N", "tol", "expect_min_indices"}},
    {"stabilize", {"sequence", "symbol", "N", "alpha", "expect_classification"}},
    {"alpha-parity", {"kernel_dim", "expect_odd_count", "expect_even_count"}},
};

} // namespace

ExperimentConfig parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", "config line " + std::to_string(line_no) +
                                      ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("", "config line " + std::to_string(line_no) +
                                      ": empty key");
        }
        if (kv.count(key)) {
            throw ConfigError(key, "config key '" + key + "' given twice");
        }
        kv[key] = value;
    }

    auto it = kv.find("experiment");
    if (it == kv.end()) {
        throw ConfigError("experiment", "config key 'experiment' is required");
    }
    ExperimentConfig cfg;
    cfg.experiment = it->second;
    const auto allowed_it = experiment_keys.find(cfg.experiment);
    if (allowed_it == experiment_keys.end()) {
        throw ConfigError("experiment",
                          "config key 'experiment': unknown experiment '" +
                              cfg.experiment + "'");
    }
    for (const auto& [key, value] : kv) {
        if (!common_keys.count(key) && !allowed_it->second.count(key)) {
            throw ConfigError(key, "config key '" + key +
                                       "' is not valid for experiment '" +
                                       cfg.experiment + "'");
        }
    }

    auto get = [&](const std::string& key) -> const std::string* {
        auto f = kv.find(key);
        return f == kv.end() ? nullptr : &f->second;
    };

    if (const auto* v = get("out")) cfg.out_dir = *v;
    if (const auto* v = get("n_min")) cfg.horizon.n_min = parse_integer("n_min", *v);
    if (const auto* v = get("n_max")) cfg.horizon.n_max = parse_integer("n_max", *v);
    if (const auto* v = get("step")) cfg.horizon.step = parse_integer("step", *v);
    if (const auto* v = get("tau_zero")) cfg.thresholds.tau_zero = parse_double("tau_zero", *v);
    if (const auto* v = get("tau_gap")) cfg.thresholds.tau_gap = parse_double("tau_gap", *v);
    if (const auto* v = get("tau_stab")) cfg.thresholds.tau_stab = parse_double("tau_stab", *v);
    if (const auto* v = get("epsilon")) cfg.thresholds.epsilon = parse_double("epsilon", *v);
    if (const auto* v = get("tail")) cfg.thresholds.tail_fraction = parse_double("tail", *v);
    if (const auto* v = get("probe_depth")) {
        cfg.thresholds.probe_depth = static_cast<int>(parse_integer("probe_depth", *v));
    }
    if (const auto* v = get("growth_min")) {
        cfg.thresholds.growth_min = parse_integer("growth_min", *v);
    }
    if (const auto* v = get("sequence")) cfg.sequence = *v;
    if (const auto* v = get("symbol")) {
        cfg.symbol = parse_symbol("symbol", *v);
        cfg.has_symbol = true;
    }
    if (const auto* v = get("parity")) cfg.parity = *v;
    if (const auto* v = get("N")) cfg.cuntz_order = static_cast<int>(parse_integer("N", *v));
    if (const auto* v = get("word_len")) cfg.word_len = static_cast<int>(parse_integer("word_len", *v));
    if (const auto* v = get("seed")) cfg.seed = static_cast<std::uint64_t>(parse_integer("seed", *v));
    if (const auto* v = get("degree")) cfg.degree = static_cast<int>(parse_integer("degree", *v));
    if (const auto* v = get("pairs")) cfg.pairs = static_cast<int>(parse_integer("pairs", *v));
    if (const auto* v = get("levels")) cfg.levels = parse_integer("levels", *v);
    if (const auto* v = get("chain")) cfg.chain = *v;
    if (const auto* v = get("bound")) cfg.bound = parse_double("bound", *v);
    if (const auto* v = get("lambda")) cfg.lambda = parse_double("lambda", *v);
    if (const auto* v = get("lambda_min")) cfg.lambda_min = parse_double("lambda_min", *v);
    if (const auto* v = get("lambda_max")) cfg.lambda_max = parse_double("lambda_max", *v);
    if (const auto* v = get("lambda_count")) {
        cfg.lambda_count = static_cast<int>(parse_integer("lambda_count", *v));
    }
    if (const auto* v = get("eps_grid")) cfg.eps_grid = parse_double_list("eps_grid", *v);
    if (const auto* v = get("tol")) cfg.tol = parse_double("tol", *v);
    if (const auto* v = get("alpha")) cfg.alpha = parse_integer("alpha", *v);
    if (const auto* v = get("kernel_dim")) {
        cfg.kernel_dim = static_cast<int>(parse_integer("kernel_dim", *v));
    }
    if (const auto* v = get("plot")) {
        if (*v != "0" && *v != "1") {
            throw ConfigError("plot", "config key 'plot': expected 0 or 1");
        }
        cfg.plot = (*v == "1");
    }
    if (const auto* v = get("expect_classification")) cfg.expect_classification = *v;
    if (const auto* v = get("expect_alpha")) cfg.expect_alpha = parse_integer("expect_alpha", *v);
    if (const auto* v = get("expect_ess_rank")) {
        if (*v == "infinite") {
            cfg.expect_ess_rank = -1;
        } else {
            cfg.expect_ess_rank = parse_integer("expect_ess_rank", *v);
        }
    }
    if (const auto* v = get("expect_pass")) {
        cfg.expect_pass = static_cast<int>(parse_integer("expect_pass", *v));
    }
    if (const auto* v = get("expect_class")) cfg.expect_class = *v;
    if (const auto* v = get("expect_no_mixed")) {
        cfg.expect_no_mixed = static_cast<int>(parse_integer("expect_no_mixed", *v));
    }
    if (const auto* v = get("expect_min_indices")) {
        cfg.expect_min_indices = parse_integer("expect_min_indices", *v);
    }
    if (const auto* v = get("expect_odd_count")) {
        cfg.expect_odd_count = parse_integer("expect_odd_count", *v);
    }
    if (const auto* v = get("expect_even_count")) {
        cfg.expect_even_count = parse_integer("expect_even_count", *v);
    }

    // Basic invariants shared by all experiments.
    const Thresholds& t = cfg.thresholds;
    if (t.tau_zero <= 0) throw ConfigError("tau_zero", "config key 'tau_zero' must be positive");
    if (t.tau_gap <= 0) throw ConfigError("tau_gap", "config key 'tau_gap' must be positive");
    if (t.tau_stab <= 0) throw ConfigError("tau_stab", "config key 'tau_stab' must be positive");
    if (t.epsilon <= 0) throw ConfigError("epsilon", "config key 'epsilon' must be positive");
    if (t.tail_fraction <= 0 || t.tail_fraction > 1) {
        throw ConfigError("tail", "config key 'tail' must lie in (0,1]");
    }
    if (t.probe_depth < 1) throw ConfigError("probe_depth", "config key 'probe_depth' must be >= 1");
    if (t.growth_min < 1) throw ConfigError("growth_min", "config key 'growth_min' must be >= 1");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

namespace {

// --- report writers ---------------------------------------------------------

class Csv {
public:
    Csv(const std::filesystem::path& path, const std::string& header) {
        out_.open(path);
        if (!out_) {
            throw NumericalBreakdownError("cannot open report file " + path.string());
        }
        out_ << header << '\n';
    }
    void raw(const std::string& line) { out_ << line << '\n'; }

private:
    std::ofstream out_;
};

class VerdictWriter {
public:
    explicit VerdictWriter(const std::filesystem::path& path)
        : csv_(path, "key,value") {}
    void row(const std::string& key, const std::string& value) {
        csv_.raw(key + "," + value);
    }
    void row(const std::string& key, double value) { row(key, format_number(value)); }
    void row(const std::string& key, long long value) { row(key, std::to_string(value)); }
    void thresholds(const Thresholds& t) {
        row("tau_zero", t.tau_zero);
        row("tau_gap", t.tau_gap);
        row("tau_stab", t.tau_stab);
        row("epsilon", t.epsilon);
        row("tail", t.tail_fraction);
        row("probe_depth", static_cast<long long>(t.probe_depth));
        row("growth_min", static_cast<long long>(t.growth_min));
    }
    void verdict(const std::string& prefix, const Verdict& v) {
        row(prefix + "classification", outcome_name(v.outcome));
        if (v.outcome == Outcome::Fredholm) {
            row(prefix + "alpha", static_cast<long long>(v.alpha));
        }
        if (v.outcome == Outcome::Compact) {
            row(prefix + "ess_rank", v.essential_rank_infinite
                                         ? std::string("infinite")
                                         : std::to_string(v.essential_rank));
        }
        for (const auto& [k, val] : v.evidence) row(prefix + k, val);
    }

private:
    Csv csv_;
};

void write_profile(const std::filesystem::path& path, const SingularProfile& p) {
    Csv csv(path, "n,k,sigma_k");
    for (std::size_t i = 0; i < p.count(); ++i) {
        for (Index k = 1; k <= p.rows[i].size(); ++k) {
            csv.raw(std::to_string(p.sizes[i]) + "," + std::to_string(k) + "," +
                    format_number(p.sv_ascending(i, k)));
        }
    }
}

// gnuplot-ready two-column data file, whitespace separated, no header.
void write_plot_data(const std::filesystem::path& path,
                     const std::vector<Index>& x, const std::vector<double>& y) {
    std::ofstream out(path);
    if (!out) {
        throw NumericalBreakdownError("cannot open plot file " + path.string());
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << x[i] << ' ' << format_number(y[i]) << '\n';
    }
}

class PointsWriter {
public:
    explicit PointsWriter(const std::filesystem::path& path)
        : csv_(path, "lambda,epsilon,n,count,class") {}
    void point(const PointClass& pc) {
        for (std::size_t e = 0; e < pc.epsilons.size(); ++e) {
            for (std::size_t i = 0; i < pc.sizes.size(); ++i) {
                csv_.raw(format_number(pc.lambda) + "," +
                         format_number(pc.epsilons[e]) + "," +
                         std::to_string(pc.sizes[i]) + "," +
                         std::to_string(pc.counts[e][i]) + "," +
                         point_label_name(pc.label));
            }
        }
    }
    void raw_row(double lambda, double eps, Index n, long count,
                 const std::string& cls) {
        csv_.raw(format_number(lambda) + "," + format_number(eps) + "," +
                 std::to_string(n) + "," + std::to_string(count) + "," + cls);
    }

private:
    Csv csv_;
};

class IdentityWriter {
public:
    explicit IdentityWriter(const std::filesystem::path& path)
        : csv_(path, "name,n,residual,pass") {}
    void report(const IdentityReport& rep, Index n) {
        csv_.raw(rep.name + "," + std::to_string(n) + "," +
                 format_number(rep.max_residual) + "," + (rep.pass ? "1" : "0"));
        all_pass_ = all_pass_ && rep.pass;
    }
    bool all_pass() const { return all_pass_; }

private:
    Csv csv_;
    bool all_pass_ = true;
};

// --- shared helpers ---------------------------------------------------------

struct Mismatch {
    bool failed = false;
    std::string message;
    void fail(const std::string& m) {
        if (!failed) message = m;
        failed = true;
    }
};

MatrixSequence build_sequence(const ExperimentConfig& cfg) {
    const std::string& name = cfg.sequence;
    if (name == "toeplitz") {
        if (!cfg.has_symbol) {
            throw ConfigError("symbol", "config key 'symbol' is required for the "
                                        "toeplitz sequence");
        }
        return toeplitz_sequence(cfg.symbol);
    }
    if (name == "block_flip") return block_flip_sequence();
    if (name == "permutation") return permutation_sequence();
    if (name == "alternating_diag") return alternating_diagonal_sequence();
    if (name == "dyadic_diag") return dyadic_diagonal_sequence();
    if (name == "identity") return identity_sequence();
    if (name == "zero") return zero_sequence();
    if (name == "cuntz_difference") return cuntz_difference_sequence(cfg.cuntz_order);
    throw ConfigError("sequence",
                      "config key 'sequence': unknown generator '" + name + "'");
}

std::vector<Index> horizon_sizes(const ExperimentConfig& cfg) {
    std::vector<Index> sizes = cfg.horizon.sizes();
    if (sizes.empty()) {
        throw ConfigError("n_min", "horizon is empty: check n_min/n_max/step");
    }
    if (cfg.parity == "even" || cfg.parity == "odd") {
        const Index want = cfg.parity == "even" ? 0 : 1;
        std::vector<Index> filtered;
        for (Index n : sizes) {
            if (n % 2 == want) filtered.push_back(n);
        }
        if (filtered.empty()) {
            throw ConfigError("parity", "horizon has no sizes of parity " + cfg.parity);
        }
        return filtered;
    }
    if (cfg.parity != "all") {
        throw ConfigError("parity", "config key 'parity': expected all, even or odd");
    }
    return sizes;
}

std::vector<double> lambda_grid_of(const ExperimentConfig& cfg) {
    if (cfg.lambda_count < 1) {
        throw ConfigError("lambda_count", "config key 'lambda_count' must be >= 1");
    }
    std::vector<double> grid;
    if (cfg.lambda_count == 1) {
        grid.push_back(cfg.lambda_min);
        return grid;
    }
    for (int i = 0; i < cfg.lambda_count; ++i) {
        grid.push_back(cfg.lambda_min + (cfg.lambda_max - cfg.lambda_min) *
                                            static_cast<double>(i) /
                                            (cfg.lambda_count - 1));
    }
    return grid;
}

// --- experiments ------------------------------------------------------------

int run_analyze(const ExperimentConfig& cfg, const std::filesystem::path& out,
                const ProfileOptions& popts) {
    const MatrixSequence seq = build_sequence(cfg);
    const std::vector<Index> sizes = horizon_sizes(cfg);
    const SingularProfile p = profile(seq, sizes, popts);
    write_profile(out / "profile.csv", p);
    if (cfg.plot) {
        std::vector<double> sigma1(p.count());
        for (std::size_t i = 0; i < p.count(); ++i) sigma1[i] = p.sv_ascending(i, 1);
        write_plot_data(out / "sigma1.dat", p.sizes, sigma1);
    }

    const Thresholds& t = cfg.thresholds;
    const Verdict stab = classify_stability(p, t.tau_stab, t.tail_fraction);
    const Verdict comp =
        classify_compact(p, t.tau_gap, t.probe_depth, t.tau_zero, t.tail_fraction);
    bool have_fredholm = p.count() >= 20;
    Verdict fred;
    if (have_fredholm) {
        fred = classify_fredholm(p, t.tau_zero, t.tau_gap, t.probe_depth,
                                 t.tail_fraction);
    }

    Outcome primary = Outcome::Inconclusive;
    if (stab.outcome == Outcome::Stable) {
        primary = Outcome::Stable;
    } else if (comp.outcome == Outcome::Compact) {
        primary = Outcome::Compact;
    } else if (have_fredholm && fred.outcome == Outcome::Fredholm) {
        primary = Outcome::Fredholm;
    } else if (have_fredholm && fred.outcome == Outcome::NotNormallySolvable) {
        primary = Outcome::NotNormallySolvable;
    } else if (stab.outcome == Outcome::NotStable) {
        primary = Outcome::NotStable;
    }

    VerdictWriter w(out / "verdict.csv");
    w.row("experiment", std::string("analyze"));
    w.row("sequence", seq.label());
    w.thresholds(t);
    w.row("classification", outcome_name(primary));
    if (primary == Outcome::Fredholm) {
        w.row("alpha", static_cast<long long>(fred.alpha));
    }
    if (primary == Outcome::Compact) {
        w.row("ess_rank", comp.essential_rank_infinite
                              ? std::string("infinite")
                              : std::to_string(comp.essential_rank));
    }
    w.verdict("stability_", stab);
    w.verdict("compact_", comp);
    if (have_fredholm) w.verdict("fredholm_", fred);

    Mismatch mm;
    if (!cfg.expect_classification.empty() &&
        cfg.expect_classification != outcome_name(primary)) {
        mm.fail("classification " + outcome_name(primary) + " != expected " +
                cfg.expect_classification);
    }
    if (cfg.expect_alpha != -2 &&
        (primary != Outcome::Fredholm || fred.alpha != cfg.expect_alpha)) {
        mm.fail("alpha mismatch");
    }
    if (cfg.expect_ess_rank != -2) {
        const bool want_inf = cfg.expect_ess_rank == -1;
        if (primary != Outcome::Compact ||
            comp.essential_rank_infinite != want_inf ||
            (!want_inf && comp.essential_rank != cfg.expect_ess_rank)) {
            mm.fail("essential rank mismatch");
        }
    }
    if (mm.failed) {
        std::cerr << "analyze: " << mm.message << '\n';
        return exit_mismatch;
    }
    return exit_ok;
}

int run_interlace(const ExperimentConfig& cfg, const std::filesystem::path& out,
                  const ProfileOptions& popts) {
    InterlaceChain chain;
    if (cfg.chain == "parity-spectrum") {
        if (cfg.levels < 4) {
            throw ConfigError("levels", "config key 'levels' must be >= 4 for the "
                                        "parity-spectrum chain");
        }
        chain = parity_spectrum_chain(cfg.levels);
    } else if (cfg.chain == "random") {
        if (cfg.levels < 1) {
            throw ConfigError("levels", "config key 'levels' must be >= 1");
        }
        if (cfg.bound <= 0) {
            throw ConfigError("bound", "config key 'bound' must be positive");
        }
        chain = random_interlacing_chain(cfg.levels, cfg.bound, cfg.seed);
    } else {
        throw ConfigError("chain",
                          "config key 'chain': expected parity-spectrum or random");
    }

    const MatrixSequence seq = interlace_chain(chain);
    Horizon horizon{1, chain.levels(), 1};
    const SingularProfile p = profile(seq, horizon, popts);
    write_profile(out / "profile.csv", p);

    double max_dev = 0.0;
    bool nesting_exact = true;
    ComplexMatrix prev;
    for (Index n = 1; n <= chain.levels(); ++n) {
        const ComplexMatrix A = seq.matrix(n);
        const RealVector ev = sym_eigenvalues(A);
        max_dev = std::max(
            max_dev,
            (ev - chain.tuples[static_cast<std::size_t>(n - 1)]).cwiseAbs().maxCoeff());
        if (n > 1) {
            nesting_exact = nesting_exact &&
                            (A.topLeftCorner(n - 1, n - 1).array() == prev.array()).all();
        }
        prev = A;
    }
    const double bound = 1e-8 * std::max(1.0, chain.bound);
    const bool pass = max_dev <= bound && nesting_exact;

    VerdictWriter w(out / "verdict.csv");
    w.row("experiment", std::string("interlace"));
    w.row("chain", cfg.chain);
    w.row("levels", static_cast<long long>(chain.levels()));
    w.thresholds(cfg.thresholds);
    w.row("max_spectrum_deviation", max_dev);
    w.row("deviation_bound", bound);
    w.row("nesting_exact", static_cast<long long>(nesting_exact ? 1 : 0));
    w.row("pass", static_cast<long long>(pass ? 1 : 0));

    if (cfg.expect_pass != -1 && (cfg.expect_pass != 0) != pass) {
        std::cerr << "interlace: pass=" << pass << " mismatches expectation\n";
        return exit_mismatch;
    }
    return exit_ok;
}

int run_cuntz(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    if (cfg.cuntz_order < 2) {
        throw ConfigError("N", "config key 'N' must be >= 2");
    }
    if (cfg.word_len < 1) {
        throw ConfigError("word_len", "config key 'word_len' must be >= 1");
    }
    const std::vector<Index> sizes = cfg.horizon.sizes();
    if (sizes.empty()) {
        throw ConfigError("n_min", "horizon is empty: check n_min/n_max/step");
    }
    const int N = cfg.cuntz_order;

    IdentityWriter iw(out / "identity.csv");
    for (Index n : sizes) {
        iw.report(cuntz_relations_check(N, n), n);
    }

    std::vector<std::vector<int>> words;
    std::vector<std::vector<int>> frontier = {{}};
    for (int len = 1; len <= cfg.word_len; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& w : frontier) {
            for (int letter = 0; letter < N; ++letter) {
                auto ext = w;
                ext.push_back(letter);
                next.push_back(ext);
                words.push_back(ext);
            }
        }
        frontier.swap(next);
    }
    for (const auto& word : words) {
        for (Index n : sizes) {
            iw.report(cuntz_projection_check(N, word, n), n);
        }
    }

    // Single-letter difference: nonzero exactly at n = jN+1, and zero along
    // the geometric subsequence N, N^2, N^3, ...
    const MatrixSequence diff = cuntz_difference_sequence(N);
    for (Index n : sizes) {
        const ComplexMatrix D = diff.matrix(n);
        ComplexMatrix predicted = ComplexMatrix::Zero(n, n);
        if (n % N == 1) {
            const Index j = (n - 1) / N;
            predicted(j, j) = 1.0;
        }
        IdentityReport rep;
        rep.name = "cuntz_difference_pattern[N=" + std::to_string(N) + "]";
        rep.sizes = {n};
        rep.max_residual = (D - predicted).cwiseAbs().maxCoeff();
        rep.bound = 1e-14;
        rep.pass = rep.max_residual <= rep.bound;
        iw.report(rep, n);
    }
    for (Index n = N; n <= sizes.back(); n *= N) {
        IdentityReport rep;
        rep.name = "cuntz_difference_geometric[N=" + std::to_string(N) + "]";
        rep.sizes = {n};
        rep.max_residual = diff.matrix(n).cwiseAbs().maxCoeff();
        rep.bound = 1e-14;
        rep.pass = rep.max_residual <= rep.bound;
        iw.report(rep, n);
        if (n > sizes.back() / N) break;
    }

    VerdictWriter w(out / "verdict.csv");
    w.row("experiment", std::string("cuntz"));
    w.row("N", static_cast<long long>(N));
    w.row("word_len", static_cast<long long>(cfg.word_len));
    w.thresholds(cfg.thresholds);
    w.row("pass", static_cast<long long>(iw.all_pass() ? 1 : 0));

    if (cfg.expect_pass != -1 && (cfg.expect_pass != 0) != iw.all_pass()) {
        std::cerr << "cuntz: identity failures recorded in identity.csv\n";
        return exit_mismatch;
    }
    return exit_ok;
}

int run_widom(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    const std::vector<Index> sizes = cfg.horizon.sizes();
    if (sizes.empty()) {
        throw ConfigError("n_min", "horizon is empty: check n_min/n_max/step");
    }
    if (cfg.degree < 0) throw ConfigError("degree", "config key 'degree' must be >= 0");
    if (cfg.pairs < 1) throw ConfigError("pairs", "config key 'pairs' must be >= 1");

    SplitMix64 rng(cfg.seed);
    IdentityWriter iw(out / "identity.csv");
    for (int i = 0; i < cfg.pairs; ++i) {
        const FourierSymbol a = random_symbol(rng, cfg.degree);
        const FourierSymbol b = random_symbol(rng, cfg.degree);
        for (Index n : sizes) {
            IdentityReport rep = widom_check(a, b, n);
            rep.name += "[pair=" + std::to_string(i) + "]";
            iw.report(rep, n);
        }
        IdentityReport refl = reflection_check(a, sizes.back());
        refl.name += "[pair=" + std::to_string(i) + "]";
        iw.report(refl, sizes.back());
    }

    VerdictWriter w(out / "verdict.csv");
    w.row("experiment", std::string("widom"));
    w.row("seed", static_cast<long long>(cfg.seed));
    w.row("degree", static_cast<long long>(cfg.degree));
    w.row("pairs", static_cast<long long>(cfg.pairs));
    w.thresholds(cfg.thresholds);
    w.row("pass", static_cast<long long>(iw.all_pass() ? 1 : 0));

    if (cfg.expect_pass != -1 && (cfg.expect_pass != 0) != iw.all_pass()) {
        std::cerr << "widom: identity failures recorded in identity.csv\n";
        return exit_mismatch;
    }
    return exit_ok;
}

int run_arveson(const ExperimentConfig& cfg, const std::filesystem::path& out,
                const ProfileOptions& popts) {
    const std::vector<double> eps_grid =
        cfg.eps_grid.empty() ? std::vector<double>{1e-8} : cfg.eps_grid;
    PointOptions popt;
    popt.growth_min = cfg.thresholds.growth_min;
    popt.tail_fraction = cfg.thresholds.tail_fraction;
    const PointClass pc = classify_point(permutation_sequence(), cfg.lambda,
                                         eps_grid, cfg.horizon, popt, popts);

    PointsWriter pw(out / "points.csv");
    pw.point(pc);
    if (cfg.plot) {
        std::vector<double> counts(pc.sizes.size());
        for (std::size_t i = 0; i < pc.sizes.size(); ++i) {
            counts[i] = static_cast<double>(pc.counts[0][i]);
        }
        write_plot_data(out / "counts.dat", pc.sizes, counts);
    }

    bool nondecreasing = true;
    for (std::size_t i = 0; i + 1 < pc.sizes.size(); ++i) {
        if (pc.counts[0][i + 1] < pc.counts[0][i]) nondecreasing = false;
    }
    const long first = pc.counts[0].front();
    const long last = pc.counts[0].back();

    VerdictWriter w(out / "verdict.csv");
    w.row("experiment", std::string("arveson"));
    w.row("lambda", cfg.lambda);
    w.thresholds(cfg.thresholds);
    w.row("class", point_label_name(pc.label));
    w.row("nondecreasing", static_cast<long long>(nondecreasing ? 1 : 0));
    w.row("first_count", static_cast<long long>(first));
    w.row("last_count", static_cast<long long>(last));

    if (!cfg.expect_class.empty() && cfg.expect_class != point_label_name(pc.label)) {
        std::cerr << "arveson: class " << point_label_name(pc.label)
                  << " mismatches expectation " << cfg.expect_class << '\n';
        return exit_mismatch;
    }
    return exit_ok;
}

int run_essential_scan(const ExperimentConfig& cfg,
                       const std::filesystem::path& out,
                       const ProfileOptions& popts) {
    if (cfg.eps_grid.empty()) {
        throw ConfigError("eps_grid", "config key 'eps_grid' is required");
    }
    const MatrixSequence seq = build_sequence(cfg);
    const std::vector<double> grid = lambda_grid_of(cfg);
    PointOptions popt;
    popt.growth_min = cfg.thresholds.growth_min;
    popt.tail_fraction = cfg.thresholds.tail_fraction;
    const DichotomyScan scan =
        dichotomy_scan(seq, grid, cfg.eps_grid, cfg.horizon, popt, popts);

    PointsWriter pw(out / "points.csv");
    long essential = 0, transient = 0, mixed = 0, inconclusive = 0;
    for (const PointClass& pc : scan.points) {
        pw.point(pc);
        switch (pc.label) {
            case PointLabel::Essential: ++essential; break;
            case PointLabel::Transient: ++transient; break;
            case PointLabel::Mixed: ++mixed; break;
            case PointLabel::Inconclusive: ++inconclusive; break;
        }
    }

    VerdictWriter w(out / "verdict.csv");
    w.row("experiment", std::string("essential-scan"));
    w.row("sequence", seq.label());
    w.thresholds(cfg.thresholds);
    w.row("essential_points", static_cast<long long>(essential));
    w.row("transient_points", static_cast<long long>(transient));
    w.row("mixed_points", static_cast<long long>(mixed));
    w.row("inconclusive_points", static_cast<long long>(inconclusive));
    w.row("any_mixed", static_cast<long long>(scan.any_mixed ? 1 : 0));
    w.row("any_inconclusive", static_cast<long long>(scan.any_inconclusive ? 1 : 0));

    if (cfg.expect_no_mixed != -1 && (cfg.expect_no_mixed != 0) == scan.any_mixed) {
        std::cerr << "essential-scan: mixed points mismatch expectation\n";
        return exit_mismatch;
    }
    return exit_ok;
}

int run_restrict(const ExperimentConfig& cfg, const std::filesystem::path& out,
                 const ProfileOptions& popts) {
    const MatrixSequence seq = build_sequence(cfg);
    const SingularProfile p = profile(seq, cfg.horizon, popts);
    write_profile(out / "profile.csv", p);

    const std::vector<Index> eta = extract_fractal_subsequence(
        p, cfg.thresholds.probe_depth, cfg.tol, cfg.thresholds.tail_fraction);

    VerdictWriter w(out / "verdict.csv");
    w.row("experiment", std::string("restrict"));
    w.row("sequence", seq.label());
    w.thresholds(cfg.thresholds);
    w.row("tol", cfg.tol);
    w.row("eta_count", static_cast<long long>(eta.size()));
    for (std::size_t i = 0; i < eta.size(); ++i) {
        w.row("eta_" + std::to_string(i), static_cast<long long>(eta[i]));
    }

    if (cfg.expect_min_indices != -2 &&
        static_cast<long>(eta.size()) < cfg.expect_min_indices) {
        std::cerr << "restrict: only " << eta.size() << " indices survive\n";
        return exit_mismatch;
    }
    return exit_ok;
}

int run_stabilize(const ExperimentConfig& cfg, const std::filesystem::path& out,
                  const ProfileOptions& popts) {
    const MatrixSequence seq = build_sequence(cfg);
    const Thresholds& t = cfg.thresholds;
    const SingularProfile base_profile = profile(seq, cfg.horizon, popts);

    long alpha = cfg.alpha;
    Verdict fred;
    if (alpha < 0) {
        fred = classify_fredholm(base_profile, t.tau_zero, t.tau_gap, t.probe_depth,
                                 t.tail_fraction);
        if (fred.outcome != Outcome::Fredholm) {
            std::cerr << "stabilize: input sequence is not Fredholm ("
                      << outcome_name(fred.outcome) << ")\n";
            return exit_mismatch;
        }
        alpha = fred.alpha;
    }

    const MatrixSequence stabilized = stabilize(seq, alpha);
    const SingularProfile p = profile(stabilized, cfg.horizon, popts);
    write_profile(out / "profile.csv", p);
    const Verdict stab = classify_stability(p, t.tau_stab, t.tail_fraction);

    // Per-entry rank of the applied perturbation.
    long max_rank = 0;
    for (Index n : cfg.horizon.sizes()) {
        const ComplexMatrix K = stabilized.matrix(n) - seq.matrix(n);
        const RealVector sv = singular_values(K);
        const double scale = sv.size() ? std::max(1.0, sv(sv.size() - 1)) : 1.0;
        long rank = 0;
        for (Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > 1e-9 * scale) ++rank;
        }
        max_rank = std::max(max_rank, rank);
    }

    VerdictWriter w(out / "verdict.csv");
    w.row("experiment", std::string("stabilize"));
    w.row("sequence", seq.label());
    w.thresholds(t);
    w.row("alpha_used", static_cast<long long>(alpha));
    w.row("max_perturbation_rank", static_cast<long long>(max_rank));
    w.row("classification", outcome_name(stab.outcome));
    w.verdict("stabilized_", stab);

    Mismatch mm;
    if (max_rank > alpha) mm.fail("perturbation rank exceeds alpha");
    if (!cfg.expect_classification.empty() &&
        cfg.expect_classification != outcome_name(stab.outcome)) {
        mm.fail("classification " + outcome_name(stab.outcome) + " != expected " +
                cfg.expect_classification);
    }
    if (mm.failed) {
        std::cerr << "stabilize: " << mm.message << '\n';
        return exit_mismatch;
    }
    return exit_ok;
}

int run_alpha_parity(const ExperimentConfig& cfg, const std::filesystem::path& out,
                     const ProfileOptions& popts) {
    if (cfg.kernel_dim < 0) {
        throw ConfigError("kernel_dim", "config key 'kernel_dim' must be >= 0");
    }
    std::vector<OuterPair> pairs;
    for (int j = 0; j < cfg.kernel_dim; ++j) {
        ComplexVector e = ComplexVector::Zero(j + 1);
        e(j) = 1.0;
        pairs.push_back({-e, e});
    }
    const ParityCounts counts = alpha_parity_check(
        pairs, cfg.horizon, cfg.thresholds.tau_zero, cfg.thresholds.tail_fraction,
        popts);

    PointsWriter pw(out / "points.csv");
    for (std::size_t i = 0; i < counts.sizes.size(); ++i) {
        pw.raw_row(0.0, cfg.thresholds.tau_zero, counts.sizes[i],
                   counts.vanishing[i], counts.sizes[i] % 2 ? "odd" : "even");
    }

    VerdictWriter w(out / "verdict.csv");
    w.row("experiment", std::string("alpha-parity"));
    w.row("kernel_dim", static_cast<long long>(cfg.kernel_dim));
    w.thresholds(cfg.thresholds);
    w.row("odd_tail_count", static_cast<long long>(counts.odd_tail));
    w.row("even_tail_count", static_cast<long long>(counts.even_tail));

    Mismatch mm;
    if (cfg.expect_odd_count != -2 && counts.odd_tail != cfg.expect_odd_count) {
        mm.fail("odd tail count mismatch");
    }
    if (cfg.expect_even_count != -2 && counts.even_tail != cfg.expect_even_count) {
        mm.fail("even tail count mismatch");
    }
    if (mm.failed) {
        std::cerr << "alpha-parity: " << mm.message << '\n';
        return exit_mismatch;
    }
    return exit_ok;
}

} // namespace

int run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
    try {
        const std::filesystem::path out =
            options.out_override.empty() ? cfg.out_dir : options.out_override;
        std::filesystem::create_directories(out);
        ProfileOptions popts;
        popts.threads = options.threads;
        popts.max_dimension = options.max_dimension;

        if (cfg.experiment == "analyze") return run_analyze(cfg, out, popts);
        if (cfg.experiment == "interlace") return run_interlace(cfg, out, popts);
        if (cfg.experiment == "cuntz") return run_cuntz(cfg, out);
        if (cfg.experiment == "widom") return run_widom(cfg, out);
        if (cfg.experiment == "arveson") return run_arveson(cfg, out, popts);
        if (cfg.experiment == "essential-scan") {
            return run_essential_scan(cfg, out, popts);
        }
        if (cfg.experiment == "restrict") return run_restrict(cfg, out, popts);
        if (cfg.experiment == "stabilize") return run_stabilize(cfg, out, popts);
        if (cfg.experiment == "alpha-parity") {
            return run_alpha_parity(cfg, out, popts);
        }
        throw ConfigError("experiment", "unknown experiment '" + cfg.experiment + "'");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_bad_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_bad_config;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace finsec
