#include <finsec/seqlab.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace finsec {

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Stable: return "Stable";
        case Outcome::NotStable: return "NotStable";
        case Outcome::Fredholm: return "Fredholm";
        case Outcome::Compact: return "Compact";
        case Outcome::NotNormallySolvable: return "NotNormallySolvable";
        case Outcome::Fractal: return "Fractal";
        case Outcome::NotFractal: return "NotFractal";
        case Outcome::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::string point_label_name(PointLabel label) {
    switch (label) {
        case PointLabel::Essential: return "Essential";
        case PointLabel::Transient: return "Transient";
        case PointLabel::Mixed: return "Mixed";
        case PointLabel::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::size_t tail_start(std::size_t count, double fraction) {
    if (count == 0) return 0;
    const auto window = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(count))));
    return count - std::min(window, count);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

namespace {

void run_indexed(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count) break;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const int use = std::min<int>(threads, static_cast<int>(count));
    pool.reserve(static_cast<std::size_t>(use));
    for (int t = 0; t < use; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

std::vector<Index> checked_sizes(const MatrixSequence& seq,
                                 const std::vector<Index>& sizes,
                                 const ProfileOptions& options) {
    if (sizes.empty()) {
        throw std::invalid_argument("horizon is empty");
    }
    for (Index n : sizes) {
        const Index d = seq.dimension(n);
        if (d > options.max_dimension) {
            std::ostringstream os;
            os << "dimension " << d << " at n=" << n << " exceeds cap "
               << options.max_dimension;
            throw std::invalid_argument(os.str());
        }
    }
    return sizes;
}

std::vector<Index> checked_sizes(const MatrixSequence& seq, const Horizon& horizon,
                                 const ProfileOptions& options) {
    return checked_sizes(seq, horizon.sizes(), options);
}

// Finite-data proxy for "sigma_k tends to 0": the tail maximum already sits
// below tau_zero, or the log-log slope over the tail is <= -0.5.
struct Trend {
    double tail_max = 0.0;
    double tail_min = 0.0;
    double loglog_slope = 0.0;
    bool to_zero = false;
};

Trend assess_trend(const std::vector<Index>& sizes,
                   const std::vector<double>& values, std::size_t first,
                   double tau_zero) {
    Trend t;
    t.tail_max = 0.0;
    t.tail_min = std::numeric_limits<double>::infinity();
    std::vector<double> lx, ly;
    for (std::size_t i = first; i < values.size(); ++i) {
        t.tail_max = std::max(t.tail_max, values[i]);
        t.tail_min = std::min(t.tail_min, values[i]);
        lx.push_back(std::log(static_cast<double>(sizes[i])));
        ly.push_back(std::log(std::max(values[i], 1e-300)));
    }
    t.loglog_slope = slope(lx, ly);
    t.to_zero = (t.tail_max < tau_zero) || (t.loglog_slope <= -0.5);
    return t;
}

} // namespace

SingularProfile profile(const MatrixSequence& seq, const Horizon& horizon,
                        const ProfileOptions& options) {
    return profile(seq, horizon.sizes(), options);
}

SingularProfile profile(const MatrixSequence& seq, const std::vector<Index>& sizes,
                        const ProfileOptions& options) {
    SingularProfile p;
    p.sizes = checked_sizes(seq, sizes, options);
    p.rows.resize(p.sizes.size());
    std::vector<std::string> failure(p.sizes.size());
    run_indexed(p.sizes.size(), options.threads, [&](std::size_t i) {
        try {
            p.rows[i] = singular_values(seq.matrix(p.sizes[i]));
        } catch (const std::exception& e) {
            failure[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failure.size(); ++i) {
        if (!failure[i].empty()) {
            throw NumericalBreakdownError("profile at n=" + std::to_string(p.sizes[i]) +
                                          ": " + failure[i]);
        }
    }
    return p;
}

std::vector<SpectrumSet> spectra_of(const MatrixSequence& seq,
                                    const Horizon& horizon,
                                    const ProfileOptions& options,
                                    double normal_tol) {
    return spectra_of(seq, horizon.sizes(), options, normal_tol);
}

std::vector<SpectrumSet> spectra_of(const MatrixSequence& seq,
                                    const std::vector<Index>& horizon_sizes,
                                    const ProfileOptions& options,
                                    double normal_tol) {
    const std::vector<Index> sizes = checked_sizes(seq, horizon_sizes, options);
    std::vector<SpectrumSet> out(sizes.size());
    std::vector<std::string> failure(sizes.size());
    run_indexed(sizes.size(), options.threads, [&](std::size_t i) {
        try {
            const ComplexMatrix M = seq.matrix(sizes[i]);
            out[i].n = sizes[i];
            const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
            if ((M - M.adjoint()).cwiseAbs().maxCoeff() <= normal_tol * scale) {
                const RealVector ev = sym_eigenvalues(M);
                out[i].values.assign(ev.data(), ev.data() + ev.size());
            } else {
                const ComplexMatrix commutator = M * M.adjoint() - M.adjoint() * M;
                if (commutator.cwiseAbs().maxCoeff() > normal_tol * scale * scale) {
                    throw NotNormalError("sequence entry at n=" +
                                         std::to_string(sizes[i]) + " is not normal");
                }
                Eigen::ComplexEigenSolver<ComplexMatrix> es(M, false);
                if (es.info() != Eigen::Success) {
                    throw NumericalBreakdownError("eigensolver failed");
                }
                const ComplexVector ev = es.eigenvalues();
                out[i].values.assign(ev.data(), ev.data() + ev.size());
                std::sort(out[i].values.begin(), out[i].values.end(),
                          [](const Complex& a, const Complex& b) {
                              if (a.real() != b.real()) return a.real() < b.real();
                              return a.imag() < b.imag();
                          });
            }
        } catch (const std::exception& e) {
            failure[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failure.size(); ++i) {
        if (!failure[i].empty()) {
            if (failure[i].find("not normal") != std::string::npos) {
                throw NotNormalError(failure[i]);
            }
            throw NumericalBreakdownError("spectra at n=" + std::to_string(sizes[i]) +
                                          ": " + failure[i]);
        }
    }
    return out;
}

Verdict classify_stability(const SingularProfile& p, double tau,
                           double tail_fraction) {
    if (p.count() < 10) {
        throw std::invalid_argument("classify_stability: need at least 10 sizes");
    }
    Verdict v;
    v.horizon = {p.sizes.front(), p.sizes.back(),
                 p.count() > 1 ? p.sizes[1] - p.sizes[0] : 1};
    const std::size_t first = tail_start(p.count(), tail_fraction);
    double tail_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i < p.count(); ++i) {
        tail_min = std::min(tail_min, p.sv_ascending(i, 1));
    }
    v.evidence["tau"] = tau;
    v.evidence["tail_fraction"] = tail_fraction;
    v.evidence["sigma1_tail_min"] = tail_min;
    v.outcome = tail_min >= tau ? Outcome::Stable : Outcome::NotStable;
    return v;
}

Verdict classify_fredholm(const SingularProfile& p, double tau_zero,
                          double tau_gap, int probe_depth, double tail_fraction) {
    if (p.count() < 20) {
        throw std::invalid_argument("classify_fredholm: need at least 20 sizes");
    }
    Verdict v;
    v.horizon = {p.sizes.front(), p.sizes.back(),
                 p.count() > 1 ? p.sizes[1] - p.sizes[0] : 1};
    v.evidence["tau_zero"] = tau_zero;
    v.evidence["tau_gap"] = tau_gap;
    v.evidence["tail_fraction"] = tail_fraction;

    const std::size_t first = tail_start(p.count(), tail_fraction);
    const Index max_k = std::min<Index>(probe_depth, p.min_dimension() - 1);

    std::vector<Trend> trend(static_cast<std::size_t>(max_k) + 2);
    for (Index k = 1; k <= max_k + 1; ++k) {
        std::vector<double> vals(p.count());
        for (std::size_t i = 0; i < p.count(); ++i) vals[i] = p.sv_ascending(i, k);
        trend[static_cast<std::size_t>(k)] = assess_trend(p.sizes, vals, first, tau_zero);
        v.evidence["sigma" + std::to_string(k) + "_tail_max"] =
            trend[static_cast<std::size_t>(k)].tail_max;
        v.evidence["sigma" + std::to_string(k) + "_slope"] =
            trend[static_cast<std::size_t>(k)].loglog_slope;
    }

    for (Index k = 0; k <= max_k; ++k) {
        bool all_vanish = true;
        for (Index j = 1; j <= k; ++j) {
            if (trend[static_cast<std::size_t>(j)].tail_max >= tau_zero) {
                all_vanish = false;
                break;
            }
        }
        if (!all_vanish) continue;
        if (trend[static_cast<std::size_t>(k + 1)].tail_min >= tau_gap) {
            v.outcome = Outcome::Fredholm;
            v.alpha = k;
            v.evidence["alpha"] = static_cast<double>(k);
            v.evidence["gap_tail_min"] = trend[static_cast<std::size_t>(k + 1)].tail_min;
            return v;
        }
    }

    bool all_to_zero = true;
    for (Index k = 1; k <= max_k + 1; ++k) {
        if (!trend[static_cast<std::size_t>(k)].to_zero) {
            all_to_zero = false;
            break;
        }
    }
    v.outcome = all_to_zero ? Outcome::NotNormallySolvable : Outcome::Inconclusive;
    return v;
}

Verdict classify_compact(const SingularProfile& p, double tau, int probe_depth,
                         double tau_zero, double tail_fraction) {
    if (p.count() < 10) {
        throw std::invalid_argument("classify_compact: need at least 10 sizes");
    }
    Verdict v;
    v.horizon = {p.sizes.front(), p.sizes.back(),
                 p.count() > 1 ? p.sizes[1] - p.sizes[0] : 1};
    v.evidence["tau"] = tau;
    v.evidence["tau_zero"] = tau_zero;
    v.evidence["tail_fraction"] = tail_fraction;

    const std::size_t first = tail_start(p.count(), tail_fraction);
    const Index max_k = std::min<Index>(probe_depth, p.min_dimension());

    // sup over sampled n >= k of the k-th largest singular value, plus the
    // per-k tail trend.
    std::vector<double> sup_from_k(static_cast<std::size_t>(max_k) + 1, 0.0);
    std::vector<Trend> trend(static_cast<std::size_t>(max_k) + 1);
    bool compact_within_depth = false;
    Index drop_k = -1;
    for (Index k = 1; k <= max_k; ++k) {
        double sup = 0.0;
        std::vector<double> vals(p.count());
        for (std::size_t i = 0; i < p.count(); ++i) {
            vals[i] = p.sv_descending(i, k);
            if (p.sizes[i] >= k) sup = std::max(sup, vals[i]);
        }
        sup_from_k[static_cast<std::size_t>(k)] = sup;
        trend[static_cast<std::size_t>(k)] = assess_trend(p.sizes, vals, first, tau_zero);
        v.evidence["sup_large" + std::to_string(k)] = sup;
        if (!compact_within_depth && sup < tau) {
            compact_within_depth = true;
            drop_k = k;
        }
    }

    if (!compact_within_depth) {
        v.evidence["sup_large_at_depth"] = sup_from_k.back();
        return v; // Inconclusive: no drop below tau within the probe depth
    }
    v.outcome = Outcome::Compact;
    v.evidence["drop_k"] = static_cast<double>(drop_k);

    long rank = 0;
    bool found_zero_level = false;
    for (Index r = max_k - 1; r >= 1; --r) {
        if (trend[static_cast<std::size_t>(r)].tail_max >= tau &&
            trend[static_cast<std::size_t>(r + 1)].to_zero) {
            rank = r;
            found_zero_level = true;
            break;
        }
    }
    if (!found_zero_level) {
        // Either the zero sequence (everything already below tau) or no
        // probed level trends to zero (infinite essential rank).
        if (trend[1].to_zero || trend[1].tail_max < tau) {
            v.essential_rank = 0;
        } else {
            v.essential_rank_infinite = true;
        }
        return v;
    }
    v.essential_rank = rank;
    return v;
}

Verdict classify_fractal_normal(const std::vector<SpectrumSet>& spectra,
                                double eps, double tail_fraction) {
    if (spectra.empty()) {
        throw std::invalid_argument("classify_fractal_normal: no spectra");
    }
    Verdict v;
    v.horizon = {spectra.front().n, spectra.back().n, 1};
    v.evidence["eps"] = eps;
    v.evidence["tail_fraction"] = tail_fraction;
    const std::size_t first = tail_start(spectra.size(), tail_fraction);
    double worst = 0.0;
    std::size_t wi = first, wj = first;
    for (std::size_t i = first; i < spectra.size(); ++i) {
        for (std::size_t j = i + 1; j < spectra.size(); ++j) {
            const double h = hausdorff(spectra[i].values, spectra[j].values);
            if (h > worst) {
                worst = h;
                wi = i;
                wj = j;
            }
        }
    }
    v.evidence["hausdorff_max"] = worst;
    if (worst <= eps) {
        v.outcome = Outcome::Fractal;
    } else {
        v.outcome = Outcome::NotFractal;
        v.evidence["witness_n1"] = static_cast<double>(spectra[wi].n);
        v.evidence["witness_n2"] = static_cast<double>(spectra[wj].n);
    }
    return v;
}

Verdict classify_fractal_normal(const MatrixSequence& seq, const Horizon& horizon,
                                double eps, double tail_fraction,
                                const ProfileOptions& options) {
    return classify_fractal_normal(spectra_of(seq, horizon, options), eps,
                                   tail_fraction);
}

// --- essential / transient points -----------------------------------------

namespace {

enum class SeriesShape { Growing, BoundedZero, BoundedPositive, Undecided };

// Shape of one count series over the tail window.
SeriesShape series_shape(const std::vector<Index>& sizes,
                         const std::vector<long>& counts, std::size_t first,
                         long growth_min) {
    bool constant = true;
    long tail_min = std::numeric_limits<long>::max();
    std::vector<double> x, y;
    for (std::size_t i = first; i < counts.size(); ++i) {
        if (counts[i] != counts[first]) constant = false;
        tail_min = std::min(tail_min, counts[i]);
        x.push_back(static_cast<double>(sizes[i]));
        y.push_back(static_cast<double>(counts[i]));
    }
    if (constant) {
        return counts[first] == 0 ? SeriesShape::BoundedZero
                                  : SeriesShape::BoundedPositive;
    }
    const double s = slope(x, y);
    if (s > 0.0 && counts.back() >= growth_min && tail_min >= 1) {
        return SeriesShape::Growing;
    }
    return SeriesShape::Undecided;
}

enum class SubVerdict { Growing, VanishedFromSpectra, PersistsBounded, Undecided };

// Verdict for one (sub)sequence across the whole epsilon grid.
SubVerdict sub_verdict(const std::vector<SeriesShape>& shapes) {
    bool all_growing = !shapes.empty();
    for (SeriesShape s : shapes) all_growing = all_growing && s == SeriesShape::Growing;
    if (all_growing) return SubVerdict::Growing;
    for (SeriesShape s : shapes) {
        if (s == SeriesShape::BoundedZero) return SubVerdict::VanishedFromSpectra;
    }
    for (SeriesShape s : shapes) {
        if (s == SeriesShape::BoundedPositive) return SubVerdict::PersistsBounded;
    }
    return SubVerdict::Undecided;
}

PointClass classify_point_from_eigs(const std::vector<Index>& sizes,
                                    const std::vector<RealVector>& eigs,
                                    double lambda,
                                    const std::vector<double>& eps_grid,
                                    const PointOptions& opts) {
    if (eps_grid.empty()) {
        throw std::invalid_argument("classify_point: empty epsilon grid");
    }
    PointClass pc;
    pc.lambda = lambda;
    pc.epsilons = eps_grid;
    pc.sizes = sizes;
    pc.counts.assign(eps_grid.size(), std::vector<long>(sizes.size(), 0));
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        if (eps_grid[e] <= 0.0) {
            throw std::invalid_argument("classify_point: epsilon must be positive");
        }
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            pc.counts[e][i] = count_in_interval(eigs[i], lambda - eps_grid[e],
                                                lambda + eps_grid[e]);
        }
    }

    const std::size_t first = tail_start(sizes.size(), opts.tail_fraction);

    std::vector<SeriesShape> full_shapes;
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        full_shapes.push_back(
            series_shape(sizes, pc.counts[e], first, opts.growth_min));
    }

    // Split the same data two ways (parity by default, caller-provided
    // otherwise) and classify each part.
    auto group_of = [&](Index n) {
        return opts.split ? opts.split(n) : static_cast<int>(n % 2);
    };
    auto split_classify = [&](int group) {
        std::vector<Index> s;
        std::vector<SeriesShape> shapes;
        std::vector<std::vector<long>> split_counts(eps_grid.size());
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            if (group_of(sizes[i]) == group) {
                s.push_back(sizes[i]);
                for (std::size_t e = 0; e < eps_grid.size(); ++e) {
                    split_counts[e].push_back(pc.counts[e][i]);
                }
            }
        }
        if (s.size() < 2) return SubVerdict::Undecided;
        const std::size_t sf = tail_start(s.size(), opts.tail_fraction);
        for (std::size_t e = 0; e < eps_grid.size(); ++e) {
            shapes.push_back(series_shape(s, split_counts[e], sf, opts.growth_min));
        }
        return sub_verdict(shapes);
    };

    const SubVerdict full = sub_verdict(full_shapes);
    const SubVerdict part0 = split_classify(0);
    const SubVerdict part1 = split_classify(1);
    pc.evidence["split0_subverdict"] = static_cast<double>(static_cast<int>(part0));
    pc.evidence["split1_subverdict"] = static_cast<double>(static_cast<int>(part1));

    if (full == SubVerdict::Growing ||
        (part0 == SubVerdict::Growing && part1 == SubVerdict::Growing)) {
        pc.label = PointLabel::Essential;
    } else if (part0 != part1 && part0 != SubVerdict::Undecided &&
               part1 != SubVerdict::Undecided) {
        pc.label = PointLabel::Mixed;
    } else if (full == SubVerdict::VanishedFromSpectra ||
               full == SubVerdict::PersistsBounded) {
        pc.label = PointLabel::Transient;
    } else {
        pc.label = PointLabel::Inconclusive;
    }
    return pc;
}

std::vector<RealVector> symmetric_eig_sweep(const MatrixSequence& seq,
                                            const std::vector<Index>& sizes,
                                            const ProfileOptions& options) {
    std::vector<RealVector> eigs(sizes.size());
    std::vector<std::string> failure(sizes.size());
    run_indexed(sizes.size(), options.threads, [&](std::size_t i) {
        try {
            eigs[i] = sym_eigenvalues(seq.matrix(sizes[i]));
        } catch (const std::exception& e) {
            failure[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failure.size(); ++i) {
        if (!failure[i].empty()) {
            if (failure[i].find("self-adjoint") != std::string::npos) {
                throw NotSelfAdjointError("entry at n=" + std::to_string(sizes[i]) +
                                          ": " + failure[i]);
            }
            throw NumericalBreakdownError("eigenvalues at n=" +
                                          std::to_string(sizes[i]) + ": " +
                                          failure[i]);
        }
    }
    return eigs;
}

} // namespace

PointClass classify_point(const MatrixSequence& seq, double lambda,
                          const std::vector<double>& eps_grid,
                          const Horizon& horizon, const PointOptions& opts,
                          const ProfileOptions& profile_opts) {
    const std::vector<Index> sizes = checked_sizes(seq, horizon, profile_opts);
    const std::vector<RealVector> eigs =
        symmetric_eig_sweep(seq, sizes, profile_opts);
    return classify_point_from_eigs(sizes, eigs, lambda, eps_grid, opts);
}

DichotomyScan dichotomy_scan(const MatrixSequence& seq,
                             const std::vector<double>& lambda_grid,
                             const std::vector<double>& eps_grid,
                             const Horizon& horizon, const PointOptions& opts,
                             const ProfileOptions& profile_opts) {
    const std::vector<Index> sizes = checked_sizes(seq, horizon, profile_opts);
    const std::vector<RealVector> eigs =
        symmetric_eig_sweep(seq, sizes, profile_opts);
    DichotomyScan scan;
    for (double lambda : lambda_grid) {
        scan.points.push_back(
            classify_point_from_eigs(sizes, eigs, lambda, eps_grid, opts));
        scan.any_mixed |= scan.points.back().label == PointLabel::Mixed;
        scan.any_inconclusive |=
            scan.points.back().label == PointLabel::Inconclusive;
    }
    return scan;
}

std::vector<Index> extract_fractal_subsequence(const SingularProfile& p,
                                               int probe_depth, double tol,
                                               double tail_fraction) {
    if (p.count() == 0) {
        throw std::invalid_argument("extract_fractal_subsequence: empty profile");
    }
    std::vector<std::size_t> selected(p.count());
    for (std::size_t i = 0; i < p.count(); ++i) selected[i] = i;

    const Index depth = std::min<Index>(probe_depth, p.min_dimension());
    // Round d = 2k-1 refines the k-th largest singular value, round d = 2k
    // the k-th smallest; both ends must settle for a fractal-looking tail.
    for (Index d = 1; d <= 2 * depth; ++d) {
        const Index k = (d + 1) / 2;
        const bool large_end = (d % 2 == 1);
        auto value = [&](std::size_t i) {
            return large_end ? p.sv_descending(i, k) : p.sv_ascending(i, k);
        };
        const std::size_t first = tail_start(selected.size(), tail_fraction);
        std::vector<double> tail_vals;
        for (std::size_t t = first; t < selected.size(); ++t) {
            tail_vals.push_back(value(selected[t]));
        }
        std::sort(tail_vals.begin(), tail_vals.end());
        const double median = tail_vals[tail_vals.size() / 2];
        std::vector<std::size_t> kept;
        for (std::size_t i : selected) {
            if (std::abs(value(i) - median) <= tol) kept.push_back(i);
        }
        selected.swap(kept);
        if (selected.size() < 3) {
            throw TooFewIndicesError(
                "extract_fractal_subsequence: fewer than 3 indices survive at "
                "depth " + std::to_string(k));
        }
    }
    std::vector<Index> out;
    out.reserve(selected.size());
    for (std::size_t i : selected) out.push_back(p.sizes[i]);
    return out;
}

MatrixSequence stabilize(const MatrixSequence& seq, long alpha) {
    if (alpha < 0) throw std::invalid_argument("stabilize: alpha must be >= 0");
    const MatrixSequence base = seq;
    return MatrixSequence(
        seq.label() + "+stabilizer",
        [base](Index n) { return base.dimension(n); },
        [base, alpha](Index n) {
            ComplexMatrix A = base.matrix(n);
            if (alpha == 0 || A.rows() == 0) return A;
            Eigen::BDCSVD<ComplexMatrix> svd(A, Eigen::ComputeThinU |
                                                    Eigen::ComputeThinV);
            if (svd.info() != Eigen::Success) {
                throw NumericalBreakdownError("stabilize: SVD failed at n=" +
                                              std::to_string(n));
            }
            const RealVector sv = svd.singularValues(); // nonincreasing
            const Index d = sv.size();
            const Index lift = std::min<Index>(alpha, d);
            // Ascending index i corresponds to descending position d-i.
            const double target = lift < d ? sv(d - lift - 1) : sv(0);
            ComplexMatrix shift = ComplexMatrix::Zero(d, d);
            for (Index i = 0; i < lift; ++i) {
                const Index pos = d - 1 - i; // i-th smallest
                shift.noalias() += Complex(target - sv(pos), 0.0) *
                                   svd.matrixU().col(pos) *
                                   svd.matrixV().col(pos).adjoint();
            }
            return ComplexMatrix(A + shift);
        });
}

ParityCounts alpha_parity_check(const std::vector<OuterPair>& compact_spec,
                                const Horizon& horizon, double tau_zero,
                                double tail_fraction,
                                const ProfileOptions& options) {
    MatrixSequence seq(
        "identity+compact(parity)", [compact_spec](Index n) {
            ComplexMatrix K = finite_rank(compact_spec, n);
            ComplexMatrix A = ComplexMatrix::Identity(n, n) + K;
            if (n % 2 == 0) A += reflect_conjugate(K);
            return A;
        });
    const SingularProfile p = profile(seq, horizon, options);

    ParityCounts out;
    out.sizes = p.sizes;
    out.vanishing.resize(p.count());
    for (std::size_t i = 0; i < p.count(); ++i) {
        long c = 0;
        for (Index k = 0; k < p.rows[i].size(); ++k) {
            if (p.rows[i](k) < tau_zero) ++c;
        }
        out.vanishing[i] = c;
    }

    auto consensus = [&](int parity) -> long {
        const std::size_t first = tail_start(p.count(), tail_fraction);
        long value = -1;
        for (std::size_t i = first; i < p.count(); ++i) {
            if (p.sizes[i] % 2 != parity) continue;
            if (value == -1) {
                value = out.vanishing[i];
            } else if (value != out.vanishing[i]) {
                return -1;
            }
        }
        return value;
    };
    out.odd_tail = consensus(1);
    out.even_tail = consensus(0);
    return out;
}

} // namespace finsec
