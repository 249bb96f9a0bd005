//
// Module      : matgen
// Description : finite sections of the structured operators under study:
//               Toeplitz/Hankel truncations, reflections, finite-rank
//               compacts, Cuntz isometries, a permutation involution, the
//               block-flip band operator, and self-adjoint matrices
//               synthesized from interlacing eigenvalue chains.
//
#ifndef FINSEC_MATGEN_HPP
#define FINSEC_MATGEN_HPP

#include <finsec/errors.hpp>
#include <finsec/symbols.hpp>
#include <finsec/types.hpp>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace finsec {

/// A dimension function delta plus a deterministic generator
/// n -> delta(n) x delta(n) complex matrix. Generators are pure: repeated
/// calls with the same n return identical matrices.
class MatrixSequence {
public:
    using DimensionMap = std::function<Index(Index)>;
    using Generator = std::function<ComplexMatrix(Index)>;

    MatrixSequence(std::string label, Generator generate)
        : MatrixSequence(std::move(label), [](Index n) { return n; },
                         std::move(generate)) {}

    MatrixSequence(std::string label, DimensionMap dimension, Generator generate)
        : label_(std::move(label)), dimension_(std::move(dimension)),
          generate_(std::move(generate)) {}

    const std::string& label() const { return label_; }

    Index dimension(Index n) const { return dimension_(n); }

    /// Generates the n-th matrix and validates its shape.
    ComplexMatrix matrix(Index n) const;

    /// Composition with a strictly increasing index map: the j-th entry of
    /// the result is the index_map(j)-th entry of this sequence.
    MatrixSequence restricted(std::function<Index(Index)> index_map,
                              const std::string& suffix) const;

private:
    std::string label_;
    DimensionMap dimension_;
    Generator generate_;
};

// --- single-matrix generators -------------------------------------------

/// Truncated Toeplitz matrix: entry (i,j) = a_{i-j}.
ComplexMatrix toeplitz(const FourierSymbol& a, Index n);

/// Truncated Hankel matrix: entry (i,j) = a_{i+j+1}.
ComplexMatrix hankel(const FourierSymbol& a, Index n);

/// Conjugation by the reversal: entry (i,j) = M(n-1-i, n-1-j).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
reflect_conjugate(const Eigen::MatrixBase<Derived>& M) {
    return M.reverse();
}

/// One term of a finite-rank operator: the outer product left * right^*.
struct OuterPair {
    ComplexVector left;
    ComplexVector right;
};

/// Leading n x n block of sum_p left_p right_p^*; vectors are zero-padded
/// or truncated to length n.
ComplexMatrix finite_rank(const std::vector<OuterPair>& pairs, Index n);

/// Truncation of the i-th of N permutative isometries: entry (k,r) = 1
/// iff k = r*N + i.
RealMatrix cuntz_isometry(int N, int i, Index n);

/// The permutation involution behind the essential-point example:
/// pi(k) = k^2+1 on multiples of 4, the order-preserving bijection on the
/// remaining evens, and the respective inverses on the odds (1-based).
class PermutationInvolution {
public:
    /// Covers arguments 1..max_index.
    explicit PermutationInvolution(Index max_index);

    Index operator()(Index k) const;
    Index max_index() const { return max_index_; }

private:
    Index max_index_;
    std::vector<Index> paired_odd_;   // m -> m-th odd not of the form 16j^2+1
    Index odd_of_even(Index k) const; // image of k in E_2
    Index even_of_odd(Index k) const; // preimage of k in O_2
};

/// Truncation of the permutation operator e_k -> e_{pi(k)}; symmetric 0/1.
RealMatrix permutation_matrix(const PermutationInvolution& pi, Index n);

/// Leading n x n block of diag([[0,1],[1,0]], [[0,1],[1,0]], ...).
RealMatrix block_flip(Index n);

// --- interlacing synthesis ----------------------------------------------

/// Bounded sequence of ordered tuples, consecutive tuples interlacing.
struct InterlaceChain {
    std::vector<RealVector> tuples; // tuples[i] has size i+1, nondecreasing
    double bound = 0.0;             // |entries| <= bound

    Index levels() const { return static_cast<Index>(tuples.size()); }

    /// Throws NotInterlacingError naming the offending level.
    void validate(double tol = 1e-12) const;
};

/// True when inner (size m) and outer (size m+1) satisfy
/// outer_1 <= inner_1 <= outer_2 <= ... <= inner_m <= outer_{m+1}
/// up to tol.
bool interlaces(const RealVector& inner, const RealVector& outer,
                double tol = 1e-12);

struct InterlaceOptions {
    double grouping_tol = 1e-8;  // scaled by max(1, bound)
    double spectrum_tol = 1e-7;  // accepted deviation of eig(A) from alpha
    double clamp_tol = 1e-10;    // tolerated negative square before error
};

/// Self-adjoint bordered extension: returns B of size n+1 whose leading
/// n x n block is exactly A and whose spectrum is beta. Requires
/// eig(A) = alpha within tolerance and beta interlacing alpha.
/// Throws NotInterlacingError, SpectrumMismatchError, NegativeSquareError.
ComplexMatrix interlace_extend(const ComplexMatrix& A, const RealVector& alpha,
                               const RealVector& beta,
                               const InterlaceOptions& options = {});

/// Nested self-adjoint matrices A_n with eig(A_n) = tuples[n-1]; each A_n
/// is exactly the leading block of A_{n+1}. Errors from interlace_extend
/// are rethrown with the offending level.
MatrixSequence interlace_chain(const InterlaceChain& chain,
                               const InterlaceOptions& options = {});

/// The worked chain with spectra {0,1,3} at even sizes >= 4 and {0,2,3}
/// at odd sizes >= 5; base tuples (1), (0,2), (0,1,3).
InterlaceChain parity_spectrum_chain(Index levels);

/// Deterministic random bounded interlacing chain.
InterlaceChain random_interlacing_chain(Index levels, double bound,
                                        std::uint64_t seed);

// --- named sequences ------------------------------------------------------

MatrixSequence toeplitz_sequence(const FourierSymbol& a);
MatrixSequence block_flip_sequence();
MatrixSequence permutation_sequence();
MatrixSequence identity_sequence();
MatrixSequence zero_sequence();

/// (P_n K P_n) for the finite-rank K described by the pairs.
MatrixSequence compact_truncation_sequence(std::vector<OuterPair> pairs,
                                           const std::string& label);

/// diag(1, 1/2, 1/4, ...) truncated.
MatrixSequence dyadic_diagonal_sequence();

/// diag(0,...,0,1) at even n and diag(0,1,...,1) at odd n.
MatrixSequence alternating_diagonal_sequence();

/// Difference of the initial projections of the first two truncated
/// isometries; nonzero exactly when n = jN+1.
MatrixSequence cuntz_difference_sequence(int N);

} // namespace finsec

#endif
