#include <finsec/matgen.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace finsec {

ComplexMatrix MatrixSequence::matrix(Index n) const {
    const Index d = dimension_(n);
    ComplexMatrix M = generate_(n);
    if (M.rows() != d || M.cols() != d) {
        std::ostringstream os;
        os << "sequence '" << label_ << "': generator returned " << M.rows()
           << "x" << M.cols() << " at n=" << n << ", expected " << d << "x" << d;
        throw NumericalBreakdownError(os.str());
    }
    return M;
}

MatrixSequence MatrixSequence::restricted(std::function<Index(Index)> index_map,
                                          const std::string& suffix) const {
    auto dim = dimension_;
    auto gen = generate_;
    auto map_copy = index_map;
    return MatrixSequence(
        label_ + suffix,
        [dim, map_copy](Index j) { return dim(map_copy(j)); },
        [gen, index_map](Index j) { return gen(index_map(j)); });
}

ComplexMatrix toeplitz(const FourierSymbol& a, Index n) {
    if (n < 1) throw std::invalid_argument("toeplitz: n must be positive");
    ComplexMatrix M = ComplexMatrix::Zero(n, n);
    for (const auto& [k, c] : a.coefficients()) {
        // entries (i, j) with i - j = k
        for (Index i = std::max<Index>(0, k); i < n && i - k < n; ++i) {
            M(i, i - k) = c;
        }
    }
    return M;
}

ComplexMatrix hankel(const FourierSymbol& a, Index n) {
    if (n < 1) throw std::invalid_argument("hankel: n must be positive");
    ComplexMatrix M = ComplexMatrix::Zero(n, n);
    for (const auto& [k, c] : a.coefficients()) {
        // entries (i, j) with i + j + 1 = k
        if (k < 1 || k > 2 * n - 1) continue;
        for (Index i = std::max<Index>(0, k - n); i <= k - 1 && i < n; ++i) {
            M(i, k - 1 - i) = c;
        }
    }
    return M;
}

ComplexMatrix finite_rank(const std::vector<OuterPair>& pairs, Index n) {
    if (n < 1) throw std::invalid_argument("finite_rank: n must be positive");
    ComplexMatrix M = ComplexMatrix::Zero(n, n);
    for (const auto& pair : pairs) {
        ComplexVector l = ComplexVector::Zero(n);
        ComplexVector r = ComplexVector::Zero(n);
        const Index nl = std::min<Index>(n, pair.left.size());
        const Index nr = std::min<Index>(n, pair.right.size());
        l.head(nl) = pair.left.head(nl);
        r.head(nr) = pair.right.head(nr);
        M.noalias() += l * r.adjoint();
    }
    return M;
}

RealMatrix cuntz_isometry(int N, int i, Index n) {
    if (N < 2) throw std::invalid_argument("cuntz_isometry: N must be >= 2");
    if (i < 0 || i >= N) throw std::invalid_argument("cuntz_isometry: index out of range");
    if (n < 1) throw std::invalid_argument("cuntz_isometry: n must be positive");
    RealMatrix M = RealMatrix::Zero(n, n);
    for (Index r = 0; r * N + i < n; ++r) {
        M(r * N + i, r) = 1.0;
    }
    return M;
}

// --- permutation involution ------------------------------------------------

namespace {

// Is k of the form 16 j^2 + 1 with j >= 1?
bool is_squared_image(Index k, Index& j_out) {
    if (k < 17 || k % 2 == 0) return false;
    const Index q = (k - 1) / 16;
    if (q * 16 != k - 1) return false;
    const Index j = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(q))));
    for (Index cand = std::max<Index>(1, j - 1); cand <= j + 1; ++cand) {
        if (cand * cand == q) {
            j_out = cand;
            return true;
        }
    }
    return false;
}

} // namespace

PermutationInvolution::PermutationInvolution(Index max_index)
    : max_index_(std::max<Index>(max_index, 2)) {
    // Walk the odd numbers, skipping images 16j^2+1, until the table covers
    // both every odd <= max_index and pairings for every even <= max_index.
    const Index need_pairs = (max_index_ + 2) / 4 + 1;
    paired_odd_.push_back(0); // 1-based table
    Index odd = 1;
    while (odd <= max_index_ ||
           static_cast<Index>(paired_odd_.size()) <= need_pairs) {
        Index j;
        if (!is_squared_image(odd, j)) paired_odd_.push_back(odd);
        odd += 2;
    }
}

Index PermutationInvolution::odd_of_even(Index k) const {
    const Index m = (k + 2) / 4;
    return paired_odd_.at(static_cast<std::size_t>(m));
}

Index PermutationInvolution::even_of_odd(Index k) const {
    auto it = std::lower_bound(paired_odd_.begin() + 1, paired_odd_.end(), k);
    if (it == paired_odd_.end() || *it != k) {
        throw std::logic_error("permutation involution: odd index not in table");
    }
    const Index m = static_cast<Index>(it - paired_odd_.begin());
    return 4 * m - 2;
}

Index PermutationInvolution::operator()(Index k) const {
    if (k < 1 || k > max_index_) {
        throw std::out_of_range("permutation involution: index outside table");
    }
    if (k % 2 == 0) {
        if (k % 4 == 0) return k * k + 1;
        return odd_of_even(k);
    }
    Index j;
    if (is_squared_image(k, j)) return 4 * j;
    return even_of_odd(k);
}

RealMatrix permutation_matrix(const PermutationInvolution& pi, Index n) {
    if (n < 1) throw std::invalid_argument("permutation_matrix: n must be positive");
    RealMatrix M = RealMatrix::Zero(n, n);
    for (Index k = 1; k <= n; ++k) {
        const Index image = pi(k);
        if (image <= n) M(image - 1, k - 1) = 1.0;
    }
    return M;
}

RealMatrix block_flip(Index n) {
    if (n < 1) throw std::invalid_argument("block_flip: n must be positive");
    RealMatrix M = RealMatrix::Zero(n, n);
    for (Index j = 0; 2 * j + 1 < n; ++j) {
        M(2 * j, 2 * j + 1) = 1.0;
        M(2 * j + 1, 2 * j) = 1.0;
    }
    return M;
}

// --- interlacing synthesis ---------------------------------------------

bool interlaces(const RealVector& inner, const RealVector& outer, double tol) {
    const Index m = inner.size();
    if (outer.size() != m + 1) return false;
    for (Index i = 0; i < m; ++i) {
        if (outer(i) > inner(i) + tol) return false;
        if (inner(i) > outer(i + 1) + tol) return false;
    }
    return true;
}

void InterlaceChain::validate(double tol) const {
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const RealVector& t = tuples[i];
        if (t.size() != static_cast<Index>(i) + 1) {
            throw NotInterlacingError("chain level " + std::to_string(i + 1) +
                                      ": tuple has wrong length");
        }
        for (Index j = 0; j + 1 < t.size(); ++j) {
            if (t(j) > t(j + 1) + tol) {
                throw NotInterlacingError("chain level " + std::to_string(i + 1) +
                                          ": tuple not nondecreasing");
            }
        }
        if (t.size() > 0 && t.cwiseAbs().maxCoeff() > bound + tol) {
            throw NotInterlacingError("chain level " + std::to_string(i + 1) +
                                      ": entry exceeds bound");
        }
        if (i > 0 && !interlaces(tuples[i - 1], t, tol)) {
            throw NotInterlacingError("chain level " + std::to_string(i + 1) +
                                      ": interlacing violated");
        }
    }
}

ComplexMatrix interlace_extend(const ComplexMatrix& A, const RealVector& alpha,
                               const RealVector& beta,
                               const InterlaceOptions& options) {
    const Index n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("interlace_extend: A not square");
    if (alpha.size() != n || beta.size() != n + 1) {
        throw std::invalid_argument("interlace_extend: tuple sizes do not match A");
    }
    const double scale = std::max(1.0, beta.cwiseAbs().maxCoeff());
    const double gtol = options.grouping_tol * scale;

    if (!interlaces(alpha, beta, gtol)) {
        throw NotInterlacingError("interlace_extend: beta does not interlace alpha");
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(A);
    if (es.info() != Eigen::Success) {
        throw NumericalBreakdownError("interlace_extend: eigendecomposition failed");
    }
    if ((es.eigenvalues() - alpha).cwiseAbs().maxCoeff() >
        options.spectrum_tol * scale) {
        throw SpectrumMismatchError("interlace_extend: eig(A) differs from alpha");
    }

    // Group alpha into distinct values with multiplicities. Each cluster is
    // represented by its first member and remembers its alpha positions.
    std::vector<double> gamma;
    std::vector<Index> mult;
    std::vector<Index> cluster_start;
    std::vector<Index> cluster_of(n);
    for (Index j = 0; j < n; ++j) {
        if (!gamma.empty() && alpha(j) - alpha(cluster_start.back() + mult.back() - 1) <= gtol) {
            mult.back() += 1;
        } else {
            gamma.push_back(alpha(j));
            mult.push_back(1);
            cluster_start.push_back(j);
        }
        cluster_of[j] = static_cast<Index>(gamma.size()) - 1;
    }
    const Index r = static_cast<Index>(gamma.size());

    // Remove mult_i - 1 entries of beta per cluster; the interlacing pins the
    // beta entries strictly interior to a cluster's alpha positions to the
    // cluster value, so the deletion is positional and sign-exact.
    std::vector<char> deleted(static_cast<std::size_t>(n) + 1, 0);
    for (Index i = 0; i < r; ++i) {
        for (Index j = cluster_start[static_cast<std::size_t>(i)] + 1;
             j < cluster_start[static_cast<std::size_t>(i)] + mult[static_cast<std::size_t>(i)];
             ++j) {
            deleted[static_cast<std::size_t>(j)] = 1;
        }
    }
    std::vector<double> delta;
    delta.reserve(static_cast<std::size_t>(r) + 1);
    for (Index j = 0; j <= n; ++j) {
        if (!deleted[static_cast<std::size_t>(j)]) delta.push_back(beta(j));
    }
    // delta now has r + 1 entries.

    // Border weights per cluster. Evaluating the reduced characteristic
    // identity at gamma_i gives
    //   x_i^2 * mult_i * prod_{j != i} (gamma_j - gamma_i)
    //     = - prod_l (delta_l - gamma_i).
    RealVector weight(r);
    for (Index i = 0; i < r; ++i) {
        long double numer = -1.0L;
        for (double d : delta) numer *= static_cast<long double>(d - gamma[i]);
        long double denom = static_cast<long double>(mult[i]);
        for (Index j = 0; j < r; ++j) {
            if (j != i) denom *= static_cast<long double>(gamma[j] - gamma[i]);
        }
        long double square = numer / denom;
        if (square < -static_cast<long double>(options.clamp_tol * scale * scale)) {
            throw NegativeSquareError(
                "interlace_extend: negative border square beyond clamp tolerance");
        }
        if (square < 0.0L) square = 0.0L;
        weight(i) = std::sqrt(static_cast<double>(square));
    }

    RealVector z(n);
    for (Index j = 0; j < n; ++j) z(j) = weight(cluster_of[j]);

    // Corner entry from the trace identity.
    const double corner = beta.sum() - alpha.sum();

    // Rotate the border back; keep the leading block exactly A.
    ComplexVector border = es.eigenvectors() * z.cast<Complex>();
    ComplexMatrix B(n + 1, n + 1);
    B.topLeftCorner(n, n) = A;
    B.col(n).head(n) = border;
    B.row(n).head(n) = border.adjoint();
    B(n, n) = Complex(corner, 0.0);
    return B;
}

MatrixSequence interlace_chain(const InterlaceChain& chain,
                               const InterlaceOptions& options) {
    chain.validate();
    const Index levels = chain.levels();
    if (levels < 1) throw std::invalid_argument("interlace_chain: empty chain");

    auto matrices = std::make_shared<std::vector<ComplexMatrix>>();
    matrices->reserve(static_cast<std::size_t>(levels));
    matrices->push_back(ComplexMatrix::Constant(1, 1, Complex(chain.tuples[0](0), 0.0)));
    for (Index n = 1; n < levels; ++n) {
        const std::string level = "interlace_chain: level " + std::to_string(n + 1) + ": ";
        try {
            matrices->push_back(interlace_extend(matrices->back(),
                                                 chain.tuples[n - 1],
                                                 chain.tuples[n], options));
        } catch (const NotInterlacingError& e) {
            throw NotInterlacingError(level + e.what());
        } catch (const SpectrumMismatchError& e) {
            throw SpectrumMismatchError(level + e.what());
        } catch (const NegativeSquareError& e) {
            throw NegativeSquareError(level + e.what());
        }
        // Verify the prescribed spectrum before extending further.
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrices->back(),
                                                        Eigen::EigenvaluesOnly);
        const double dev =
            (es.eigenvalues() - chain.tuples[n]).cwiseAbs().maxCoeff();
        if (dev > options.spectrum_tol * std::max(1.0, chain.bound)) {
            throw SpectrumMismatchError("interlace_chain: level " +
                                        std::to_string(n + 1) +
                                        ": spectrum deviation " + std::to_string(dev));
        }
    }

    return MatrixSequence(
        "interlace[" + std::to_string(levels) + "]",
        [levels](Index n) {
            if (n < 1 || n > levels) {
                throw std::out_of_range("interlace sequence: n outside chain");
            }
            return n;
        },
        [matrices, levels](Index n) {
            if (n < 1 || n > levels) {
                throw std::out_of_range("interlace sequence: n outside chain");
            }
            return (*matrices)[static_cast<std::size_t>(n - 1)];
        });
}

InterlaceChain parity_spectrum_chain(Index levels) {
    if (levels < 4) {
        throw std::invalid_argument("parity_spectrum_chain: need at least 4 levels");
    }
    InterlaceChain chain;
    chain.bound = 3.0;
    chain.tuples.reserve(static_cast<std::size_t>(levels));
    for (Index n = 1; n <= levels; ++n) {
        RealVector t(n);
        if (n == 1) {
            t << 1.0;
        } else if (n == 2) {
            t << 0.0, 2.0;
        } else if (n == 3) {
            t << 0.0, 1.0, 3.0;
        } else if (n % 2 == 0) {
            const Index k = n / 2;
            t.setZero();
            t(k) = 1.0;
            t.tail(n - k - 1).setConstant(3.0);
        } else {
            const Index k = (n - 1) / 2;
            t.setZero();
            t(k + 1) = 2.0;
            t.tail(n - k - 2).setConstant(3.0);
        }
        chain.tuples.push_back(std::move(t));
    }
    return chain;
}

InterlaceChain random_interlacing_chain(Index levels, double bound,
                                        std::uint64_t seed) {
    if (levels < 1) throw std::invalid_argument("random_interlacing_chain: levels < 1");
    if (bound <= 0.0) throw std::invalid_argument("random_interlacing_chain: bound <= 0");
    SplitMix64 rng(seed);
    InterlaceChain chain;
    chain.bound = bound;
    chain.tuples.resize(static_cast<std::size_t>(levels));

    // Top tuple on a jittered grid, then fill downward through the gaps.
    // Keeping draws away from slot ends keeps the spectra well separated,
    // which the bordered reconstruction rewards with full accuracy.
    RealVector top(levels);
    const double cell = 2.0 * bound / static_cast<double>(levels);
    for (Index i = 0; i < levels; ++i) {
        top(i) = -bound + cell * (static_cast<double>(i) + 0.2 + 0.6 * rng.unit());
    }
    chain.tuples[static_cast<std::size_t>(levels - 1)] = top;
    for (Index n = levels - 1; n >= 1; --n) {
        const RealVector& outer = chain.tuples[static_cast<std::size_t>(n)];
        RealVector inner(n);
        for (Index i = 0; i < n; ++i) {
            const double lo = outer(i), hi = outer(i + 1);
            inner(i) = lo + (hi - lo) * (0.2 + 0.6 * rng.unit());
        }
        chain.tuples[static_cast<std::size_t>(n - 1)] = inner;
    }
    return chain;
}

// --- named sequences ------------------------------------------------------

MatrixSequence toeplitz_sequence(const FourierSymbol& a) {
    return MatrixSequence("toeplitz" + to_string(a),
                          [a](Index n) { return toeplitz(a, n); });
}

MatrixSequence block_flip_sequence() {
    return MatrixSequence("block_flip", [](Index n) {
        return ComplexMatrix(block_flip(n).cast<Complex>());
    });
}

MatrixSequence permutation_sequence() {
    return MatrixSequence("permutation", [](Index n) {
        PermutationInvolution pi(n);
        return ComplexMatrix(permutation_matrix(pi, n).cast<Complex>());
    });
}

MatrixSequence identity_sequence() {
    return MatrixSequence("identity",
                          [](Index n) { return ComplexMatrix(ComplexMatrix::Identity(n, n)); });
}

MatrixSequence zero_sequence() {
    return MatrixSequence("zero",
                          [](Index n) { return ComplexMatrix(ComplexMatrix::Zero(n, n)); });
}

MatrixSequence compact_truncation_sequence(std::vector<OuterPair> pairs,
                                           const std::string& label) {
    auto shared = std::make_shared<std::vector<OuterPair>>(std::move(pairs));
    return MatrixSequence(label,
                          [shared](Index n) { return finite_rank(*shared, n); });
}

MatrixSequence dyadic_diagonal_sequence() {
    return MatrixSequence("dyadic_diag", [](Index n) {
        ComplexMatrix M = ComplexMatrix::Zero(n, n);
        for (Index j = 0; j < n; ++j) M(j, j) = std::ldexp(1.0, -static_cast<int>(j));
        return M;
    });
}

MatrixSequence alternating_diagonal_sequence() {
    return MatrixSequence("alternating_diag", [](Index n) {
        ComplexMatrix M = ComplexMatrix::Zero(n, n);
        if (n % 2 == 0) {
            M(n - 1, n - 1) = 1.0;
        } else {
            for (Index j = 1; j < n; ++j) M(j, j) = 1.0;
        }
        return M;
    });
}

MatrixSequence cuntz_difference_sequence(int N) {
    if (N < 2) throw std::invalid_argument("cuntz_difference_sequence: N must be >= 2");
    return MatrixSequence("cuntz_diff[" + std::to_string(N) + "]", [N](Index n) {
        const RealMatrix M0 = cuntz_isometry(N, 0, n);
        const RealMatrix M1 = cuntz_isometry(N, 1, n);
        RealMatrix D = M0.transpose() * M0 - M1.transpose() * M1;
        return ComplexMatrix(D.cast<Complex>());
    });
}

} // namespace finsec
