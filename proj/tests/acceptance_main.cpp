//
// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.
//
#include <finsec/identities.hpp>
#include <finsec/seqlab.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace finsec;

namespace {

struct Harness {
    int failures = 0;
    int total = 0;

    void criterion(int id, const std::string& label,
                   const std::function<bool(std::ostringstream&)>& body) {
        std::ostringstream detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        ++total;
        if (!ok) ++failures;
        std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id,
                    label.c_str(), detail.str().empty() ? "" : " | ",
                    detail.str().c_str());
        std::fflush(stdout);
    }
};

std::vector<Index> arithmetic(Index lo, Index hi, Index step) {
    std::vector<Index> out;
    for (Index n = lo; n <= hi; n += step) out.push_back(n);
    return out;
}

double plain_slope(const std::vector<double>& x, const std::vector<double>& y) {
    return slope(x, y);
}

} // namespace

int main() {
    Harness h;

    // 1. Truncated product identity at machine precision.
    h.criterion(1, "product identity exact on random polynomial pairs", [](std::ostringstream& d) {
        SplitMix64 rng(20240001);
        double worst_ratio = 0.0;
        bool ok = true;
        for (int pair = 0; pair < 50; ++pair) {
            const int degree = 1 + static_cast<int>(rng.next() % 8);
            const FourierSymbol a = random_symbol(rng, degree);
            const FourierSymbol b = random_symbol(rng, degree);
            const double bound = 1e-12 * (1.0 + sup_norm(a) * sup_norm(b));
            for (Index n : {16, 64, 256}) {
                const IdentityReport rep = widom_check(a, b, n);
                ok = ok && rep.max_residual <= bound;
                worst_ratio = std::max(worst_ratio, rep.max_residual / bound);
            }
        }
        d << "worst residual/bound = " << worst_ratio;
        return ok;
    });

    // 2. Stability of the affine symbol, instability of the shift.
    h.criterion(2, "stability criterion on affine and shift symbols", [](std::ostringstream& d) {
        const Horizon horizon{32, 1024, 32};
        const Verdict stable = classify_stability(
            profile(toeplitz_sequence(FourierSymbol{{0, 2.0}, {1, 1.0}}), horizon),
            1e-6);
        const SingularProfile shift =
            profile(toeplitz_sequence(FourierSymbol::monomial(1)), horizon);
        const Verdict unstable = classify_stability(shift, 1e-6);
        double shift_sigma1_max = 0.0;
        for (std::size_t i = 0; i < shift.count(); ++i) {
            shift_sigma1_max = std::max(shift_sigma1_max, shift.sv_ascending(i, 1));
        }
        d << "tail_min = " << stable.evidence.at("sigma1_tail_min")
          << ", shift sigma1 max = " << shift_sigma1_max;
        return stable.outcome == Outcome::Stable &&
               stable.evidence.at("sigma1_tail_min") >= 1.0 - 1e-6 &&
               unstable.outcome == Outcome::NotStable && shift_sigma1_max < 1e-12;
    });

    // 3. Vanishing counts against the winding oracle, with splitting.
    h.criterion(3, "vanishing count formula matches the winding oracle", [](std::ostringstream& d) {
        const Horizon horizon{40, 420, 20};
        const std::vector<std::pair<FourierSymbol, long>> cases = {
            {FourierSymbol::monomial(1), 1},
            {FourierSymbol::monomial(2), 2},
            {FourierSymbol::monomial(3), 3},
            {FourierSymbol{{0, 2.0}, {1, 1.0}}, 0},
        };
        bool ok = true;
        for (const auto& [a, expect] : cases) {
            const Verdict v =
                classify_fredholm(profile(toeplitz_sequence(a), horizon), 1e-6, 1e-3);
            const int w = winding_number(a);
            const long oracle = std::max(0, -w) + std::max(0, w);
            ok = ok && v.outcome == Outcome::Fredholm && v.alpha == expect &&
                 oracle == expect;
            if (v.alpha > 0) {
                ok = ok && v.evidence.at("sigma" + std::to_string(v.alpha) +
                                         "_tail_max") < 1e-6;
            }
            ok = ok && v.evidence.at("gap_tail_min") >= 0.5;
            d << "alpha(" << to_string(a) << ")=" << v.alpha << " ";
        }
        return ok;
    });

    // 4. Vanishing symbol: every probed singular value collapses.
    h.criterion(4, "vanishing symbol is not normally solvable", [](std::ostringstream& d) {
        const Horizon horizon{100, 1000, 100};
        const SingularProfile p =
            profile(toeplitz_sequence(FourierSymbol{{1, 1.0}, {-1, 1.0}}), horizon);
        bool ok = true;
        double worst_slope = 0.0;
        for (Index k = 1; k <= 5; ++k) {
            ok = ok && p.sv_ascending(p.count() - 1, k) < 0.05;
            std::vector<double> lx, ly;
            for (std::size_t i = 0; i < p.count(); ++i) {
                lx.push_back(std::log(static_cast<double>(p.sizes[i])));
                ly.push_back(std::log(std::max(p.sv_ascending(i, k), 1e-300)));
            }
            const double s = plain_slope(lx, ly);
            worst_slope = std::min(worst_slope, -std::abs(s));
            ok = ok && s <= -0.9;
        }
        const Verdict v = classify_fredholm(
            profile(toeplitz_sequence(FourierSymbol{{1, 1.0}, {-1, 1.0}}),
                    Horizon{50, 525, 25}),
            1e-6, 1e-3);
        ok = ok && v.outcome == Outcome::NotNormallySolvable;
        d << "sigma5(A_1000) = " << p.sv_ascending(p.count() - 1, 5)
          << ", classification = " << outcome_name(v.outcome);
        return ok;
    });

    // 5. Compactness and essential rank, finite and infinite.
    h.criterion(5, "compactness detector and essential ranks", [](std::ostringstream& d) {
        std::vector<OuterPair> pairs;
        const double weights[3] = {3.0, 2.0, 1.0};
        for (int j = 0; j < 3; ++j) {
            ComplexVector e = ComplexVector::Zero(j + 1);
            e(j) = 1.0;
            pairs.push_back({weights[j] * e, e});
        }
        const Verdict rank3 = classify_compact(
            profile(compact_truncation_sequence(pairs, "rank3"), Horizon{16, 106, 10}),
            1e-3, 8);
        const Verdict dyadic = classify_compact(
            profile(dyadic_diagonal_sequence(), Horizon{20, 110, 10}), 1e-3, 16);
        bool ok = rank3.outcome == Outcome::Compact && rank3.essential_rank == 3 &&
                  dyadic.outcome == Outcome::Compact &&
                  dyadic.essential_rank_infinite;
        double worst = 0.0;
        for (int k = 1; k <= 8; ++k) {
            const double dev = std::abs(
                dyadic.evidence.at("sup_large" + std::to_string(k)) -
                std::ldexp(1.0, 1 - k));
            worst = std::max(worst, dev);
        }
        ok = ok && worst <= 1e-12;
        d << "rank3 -> " << rank3.essential_rank
          << ", dyadic infinite, sup deviation = " << worst;
        return ok;
    });

    // 6. Stabilizing perturbation of the shift truncations.
    h.criterion(6, "stabilizing perturbation with rank bound", [](std::ostringstream& d) {
        const MatrixSequence shift = toeplitz_sequence(FourierSymbol::monomial(1));
        const MatrixSequence fixed = stabilize(shift, 1);
        const Horizon horizon{32, 320, 32};
        bool ok = true;
        double min_sigma1 = 1e300;
        for (Index n : horizon.sizes()) {
            const RealVector ks = singular_values(fixed.matrix(n) - shift.matrix(n));
            long rank = 0;
            for (Index i = 0; i < ks.size(); ++i) {
                if (ks(i) > 1e-10) ++rank;
            }
            ok = ok && rank <= 1;
            const RealVector sv = singular_values(fixed.matrix(n));
            min_sigma1 = std::min(min_sigma1, sv(0));
        }
        ok = ok && min_sigma1 >= 1.0 - 1e-9;
        d << "min sigma1 after repair = " << min_sigma1;
        return ok;
    });

    // 7. Interlacing synthesis: prescribed spectra and exact nesting.
    h.criterion(7, "interlacing synthesis reproduces prescribed spectra", [](std::ostringstream& d) {
        bool ok = true;
        double worst = 0.0;
        for (std::uint64_t seed : {11ULL, 42ULL, 1001ULL}) {
            const InterlaceChain chain = random_interlacing_chain(30, 10.0, seed);
            const MatrixSequence seq = interlace_chain(chain);
            ComplexMatrix prev;
            for (Index n = 1; n <= 30; ++n) {
                const ComplexMatrix A = seq.matrix(n);
                const double dev =
                    (sym_eigenvalues(A) - chain.tuples[static_cast<std::size_t>(n - 1)])
                        .cwiseAbs()
                        .maxCoeff();
                worst = std::max(worst, dev);
                ok = ok && dev <= 1e-9;
                if (n > 1) {
                    ok = ok && (A.topLeftCorner(n - 1, n - 1).array() == prev.array()).all();
                }
                prev = A;
            }
        }
        // the worked parity chain: {0,1,3} at even, {0,2,3} at odd sizes
        const MatrixSequence parity = interlace_chain(parity_spectrum_chain(40));
        for (Index n = 4; n <= 40; ++n) {
            const RealVector ev = sym_eigenvalues(parity.matrix(n));
            const std::vector<double> want =
                (n % 2 == 0) ? std::vector<double>{0.0, 1.0, 3.0}
                             : std::vector<double>{0.0, 2.0, 3.0};
            for (Index i = 0; i < ev.size(); ++i) {
                double best = 1e300;
                for (double wv : want) best = std::min(best, std::abs(ev(i) - wv));
                ok = ok && best <= 1e-8;
            }
            for (double wv : want) {
                double best = 1e300;
                for (Index i = 0; i < ev.size(); ++i) {
                    best = std::min(best, std::abs(ev(i) - wv));
                }
                ok = ok && best <= 1e-8;
            }
        }
        d << "worst random-chain spectrum deviation = " << worst;
        return ok;
    });

    // 8. Essential/transient classification and the dichotomy scan.
    h.criterion(8, "essential/transient points and dichotomy scan", [](std::ostringstream& d) {
        bool ok = true;
        const MatrixSequence parity = interlace_chain(parity_spectrum_chain(40));
        const Horizon chain_horizon{8, 40, 1};
        const std::vector<double> chain_eps{0.1, 0.25};
        ok = ok && classify_point(parity, 0.0, chain_eps, chain_horizon).label ==
                       PointLabel::Essential;
        ok = ok && classify_point(parity, 10.0, chain_eps, chain_horizon).label ==
                       PointLabel::Transient;
        ok = ok && classify_point(parity, 1.0, chain_eps, chain_horizon).label ==
                       PointLabel::Mixed;
        ok = ok && classify_point(parity, 2.0, chain_eps, chain_horizon).label ==
                       PointLabel::Mixed;

        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(-3.0 + 0.15 * i);
        const double eps_max = 0.15;
        const DichotomyScan scan = dichotomy_scan(
            toeplitz_sequence(FourierSymbol{{1, 1.0}, {-1, 1.0}}), grid,
            {0.05, eps_max}, Horizon{100, 1000, 100});
        int essential = 0, transient = 0;
        for (const PointClass& pc : scan.points) {
            if (std::abs(pc.lambda) < 2.0 - eps_max) {
                ok = ok && pc.label == PointLabel::Essential;
            }
            if (std::abs(pc.lambda) > 2.0 + eps_max) {
                ok = ok && pc.label == PointLabel::Transient;
            }
            if (pc.label == PointLabel::Essential) ++essential;
            if (pc.label == PointLabel::Transient) ++transient;
        }
        ok = ok && !scan.any_mixed;
        d << "scan: " << essential << " essential, " << transient
          << " transient, mixed = " << (scan.any_mixed ? 1 : 0);
        return ok;
    });

    // 9. The permutation example: multiplicity of 0 grows without bound.
    h.criterion(9, "zero is essential for the permutation truncations", [](std::ostringstream& d) {
        const PointClass pc = classify_point(permutation_sequence(), 0.0, {1e-8},
                                             Horizon{100, 2000, 100});
        bool ok = pc.label == PointLabel::Essential;
        const std::vector<long>& counts = pc.counts[0];
        for (std::size_t i = 0; i + 1 < counts.size(); ++i) {
            ok = ok && counts[i + 1] >= counts[i];
        }
        ok = ok && counts.back() >= 2 * counts.front();
        d << "count(100) = " << counts.front() << ", count(2000) = " << counts.back();
        return ok;
    });

    // 10. Truncated isometries: relations, cutoffs, difference pattern.
    h.criterion(10, "truncated isometry identities", [](std::ostringstream& d) {
        bool ok = true;
        for (int N : {2, 3}) {
            for (Index n = 1; n <= 200; ++n) {
                ok = ok && cuntz_relations_check(N, n).max_residual == 0.0;
            }
            std::vector<std::vector<int>> words;
            std::vector<std::vector<int>> frontier = {{}};
            for (int len = 1; len <= 3; ++len) {
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
                for (Index n = 1; n <= 200; ++n) {
                    ok = ok && cuntz_projection_check(N, word, n).max_residual == 0.0;
                }
            }
            const MatrixSequence diff = cuntz_difference_sequence(N);
            for (Index n = 1; n <= 200; ++n) {
                const bool zero = diff.matrix(n).isZero(0.0);
                ok = ok && zero == (n % N != 1);
            }
            for (Index n = N; n <= 1024; n *= N) {
                ok = ok && diff.matrix(n).isZero(0.0);
            }
        }
        d << "all residuals identically zero";
        return ok;
    });

    // 11. Fractality detectors and fractal restriction.
    h.criterion(11, "fractality detectors and parity extraction", [](std::ostringstream& d) {
        bool ok = true;
        const MatrixSequence alt = alternating_diagonal_sequence();
        ok = ok && classify_fractal_normal(alt, Horizon{10, 40, 1}, 1e-8).outcome ==
                       Outcome::Fractal;

        std::vector<Index> evens, odds;
        for (Index n = 10; n <= 49; ++n) {
            (n % 2 == 0 ? evens : odds).push_back(n);
        }
        const Verdict even_v = classify_compact(profile(alt, evens), 1e-3, 8);
        ok = ok && even_v.outcome == Outcome::Compact && even_v.essential_rank == 1;
        const Verdict odd_v = classify_fredholm(profile(alt, odds), 1e-6, 1e-3);
        ok = ok && odd_v.outcome == Outcome::Fredholm && odd_v.alpha == 1 &&
             odd_v.evidence.at("gap_tail_min") >= 0.5;

        ok = ok && classify_fractal_normal(block_flip_sequence(), Horizon{4, 40, 1},
                                           0.25)
                           .outcome == Outcome::NotFractal;
        const std::vector<Index> eta = extract_fractal_subsequence(
            profile(block_flip_sequence(), Horizon{8, 64, 1}), 4, 0.1);
        ok = ok && eta.size() >= 20;
        for (Index n : eta) ok = ok && n % 2 == eta.front() % 2;
        d << "alternating fractal; even -> Compact(1), odd -> Fredholm("
          << odd_v.alpha << "); extraction kept " << eta.size() << " sizes";
        return ok;
    });

    // 12. Norm of the truncations approaches the symbol sup-norm from below.
    h.criterion(12, "truncation norms approach the sup-norm monotonically", [](std::ostringstream& d) {
        const FourierSymbol a{{0, 2.0}, {1, 1.0}};
        double prev = 0.0;
        bool ok = true;
        double last = 0.0;
        for (Index n = 64; n <= 1024; n += 64) {
            last = spectral_norm(toeplitz(a, n));
            ok = ok && last >= prev - 1e-12;
            prev = last;
        }
        ok = ok && std::abs(last - 3.0) <= 1e-2;
        const IdentityReport rep = norm_formula_check(a, Horizon{64, 1024, 64});
        ok = ok && rep.pass;
        d << "norm at n=1024 is " << last;
        return ok;
    });

    // 13. Parity-dependent vanishing counts.
    h.criterion(13, "parity-weighted vanishing counts", [](std::ostringstream& d) {
        std::vector<OuterPair> pairs;
        ComplexVector e0 = ComplexVector::Zero(1);
        e0(0) = 1.0;
        pairs.push_back({-e0, e0});
        const ParityCounts counts =
            alpha_parity_check(pairs, Horizon{10, 41, 1}, 1e-6);
        d << "odd tail = " << counts.odd_tail << ", even tail = " << counts.even_tail;
        return counts.odd_tail == 1 && counts.even_tail == 2;
    });

    std::printf("%d/%d criteria passed\n", h.total - h.failures, h.total);
    return h.failures == 0 ? 0 : 1;
}
