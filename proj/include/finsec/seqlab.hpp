//
// Module      : seqlab
// Description : classification of matrix sequences from finite-horizon
//               singular-value and eigenvalue data: stability, Fredholm
//               property with vanishing count, compactness with essential
//               rank, normal solvability, fractality of normal sequences,
//               essential/transient points, and the dichotomy scan;
//               plus fractal-subsequence extraction and stabilizing
//               perturbations.
//
#ifndef FINSEC_SEQLAB_HPP
#define FINSEC_SEQLAB_HPP

#include <finsec/matgen.hpp>
#include <finsec/spectra.hpp>

#include <map>
#include <string>
#include <vector>

namespace finsec {

enum class Outcome {
    Stable,
    NotStable,
    Fredholm,
    Compact,
    NotNormallySolvable,
    Fractal,
    NotFractal,
    Inconclusive,
};

std::string outcome_name(Outcome o);

/// Classification outcome with full numeric evidence. Verdicts carry the
/// thresholds used, so reports stay auditable.
struct Verdict {
    Outcome outcome = Outcome::Inconclusive;
    long alpha = -1;                     // vanishing count, Fredholm only
    long essential_rank = -1;            // Compact only, -1 when infinite
    bool essential_rank_infinite = false;
    std::map<std::string, double> evidence;
    Horizon horizon;
};

struct ProfileOptions {
    int threads = 1;
    Index max_dimension = 4096;
};

/// Singular values of seq over the horizon; deterministic merge by index.
SingularProfile profile(const MatrixSequence& seq, const Horizon& horizon,
                        const ProfileOptions& options = {});
SingularProfile profile(const MatrixSequence& seq, const std::vector<Index>& sizes,
                        const ProfileOptions& options = {});

/// Eigenvalue multisets of seq over the horizon. Self-adjoint entries go
/// through the symmetric solver; other entries must pass the normality
/// check (throws NotNormalError).
std::vector<SpectrumSet> spectra_of(const MatrixSequence& seq,
                                    const Horizon& horizon,
                                    const ProfileOptions& options = {},
                                    double normal_tol = 1e-10);
std::vector<SpectrumSet> spectra_of(const MatrixSequence& seq,
                                    const std::vector<Index>& sizes,
                                    const ProfileOptions& options = {},
                                    double normal_tol = 1e-10);

// --- classifiers ----------------------------------------------------------

/// Stable iff the tail minimum of the smallest singular value is >= tau.
Verdict classify_stability(const SingularProfile& p, double tau,
                           double tail_fraction = 0.25);

/// Fredholm(alpha) when exactly alpha singular values vanish (tail max
/// below tau_zero) while the next stays >= tau_gap; NotNormallySolvable
/// when every probed sigma_k trends to zero; Inconclusive otherwise.
Verdict classify_fredholm(const SingularProfile& p, double tau_zero,
                          double tau_gap, int probe_depth = 8,
                          double tail_fraction = 0.25);

/// Compact when sup over the tail-of-horizon of the k-th largest singular
/// value drops below tau within the probe depth. The essential rank is the
/// largest r whose r-th largest singular value stays >= tau while the
/// (r+1)-th trends to zero; infinite when no probed level trends to zero.
Verdict classify_compact(const SingularProfile& p, double tau,
                         int probe_depth = 8, double tau_zero = 1e-6,
                         double tail_fraction = 0.25);

/// Fractal iff all pairwise Hausdorff distances of the tail-window spectra
/// are <= eps; otherwise NotFractal with a witness pair in the evidence.
Verdict classify_fractal_normal(const std::vector<SpectrumSet>& spectra,
                                double eps, double tail_fraction = 0.25);

/// Convenience wrapper that computes the spectra (and enforces normality).
Verdict classify_fractal_normal(const MatrixSequence& seq, const Horizon& horizon,
                                double eps, double tail_fraction = 0.25,
                                const ProfileOptions& options = {});

// --- essential / transient points -----------------------------------------

enum class PointLabel { Essential, Transient, Mixed, Inconclusive };

std::string point_label_name(PointLabel label);

struct PointClass {
    double lambda = 0.0;
    PointLabel label = PointLabel::Inconclusive;
    std::vector<double> epsilons;
    std::vector<Index> sizes;
    std::vector<std::vector<long>> counts; // counts[e][i], e over epsilons
    std::map<std::string, double> evidence;
};

struct PointOptions {
    long growth_min = 4;        // minimum final count for a growing series
    double tail_fraction = 0.25;
    // Optional 2-way split of the sizes for the Mixed detector; nullptr
    // means split by parity of n. Must return 0 or 1.
    std::function<int(Index)> split;
};

/// Eigenvalue-count classification of one real point. Essential needs the
/// counts of every tested interval to grow along the tail; Transient needs
/// some tested interval with tail-constant counts; Mixed flags split
/// subsequences whose limiting behaviour at lambda differs (one keeps the
/// point in its spectra, the other loses it).
PointClass classify_point(const MatrixSequence& seq, double lambda,
                          const std::vector<double>& eps_grid,
                          const Horizon& horizon, const PointOptions& opts = {},
                          const ProfileOptions& profile_opts = {});

struct DichotomyScan {
    std::vector<PointClass> points;
    bool any_mixed = false;
    bool any_inconclusive = false;
};

/// classify_point over a grid of lambdas, sharing one eigenvalue sweep.
DichotomyScan dichotomy_scan(const MatrixSequence& seq,
                             const std::vector<double>& lambda_grid,
                             const std::vector<double>& eps_grid,
                             const Horizon& horizon,
                             const PointOptions& opts = {},
                             const ProfileOptions& profile_opts = {});

// --- extraction and perturbation -------------------------------------------

/// Greedy diagonal refinement: returns the sizes n of the profile on which
/// the k-th largest and the k-th smallest singular values each oscillate by
/// at most tol around the tail median, for every k <= probe_depth. Throws
/// TooFewIndicesError when fewer than 3 sizes survive.
std::vector<Index> extract_fractal_subsequence(const SingularProfile& p,
                                               int probe_depth, double tol,
                                               double tail_fraction = 0.25);

/// Rank-<= alpha per-entry perturbation built from the singular value
/// decomposition; lifts the alpha smallest singular values up to the
/// (alpha+1)-th, so the perturbed sequence is stable whenever the input
/// was Fredholm with that vanishing count.
MatrixSequence stabilize(const MatrixSequence& seq, long alpha);

/// Vanishing singular value counts of I + P_n K P_n (odd n) and
/// I + P_n K P_n + R_n K R_n (even n) for the finite-rank K given by the
/// pairs; the tail counts expose the parity-dependent weight.
struct ParityCounts {
    std::vector<Index> sizes;
    std::vector<long> vanishing;
    long odd_tail = -1;  // consensus tail value on odd n, -1 if not constant
    long even_tail = -1; // consensus tail value on even n
};

ParityCounts alpha_parity_check(const std::vector<OuterPair>& compact_spec,
                                const Horizon& horizon, double tau_zero = 1e-6,
                                double tail_fraction = 0.25,
                                const ProfileOptions& options = {});

// --- shared helpers ---------------------------------------------------------

/// First index of the tail window covering the trailing `fraction` of count.
std::size_t tail_start(std::size_t count, double fraction);

/// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y);

struct Thresholds {
    double tau_zero = 1e-6;
    double tau_gap = 1e-3;
    double tau_stab = 1e-6;
    double epsilon = 1e-2;
    double tail_fraction = 0.25;
    int probe_depth = 8;
    long growth_min = 4;
};

} // namespace finsec

#endif
