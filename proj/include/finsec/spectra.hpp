//
// Module      : spectra
// Description : dense spectral kernels and set-valued limit tooling.
//
#ifndef FINSEC_SPECTRA_HPP
#define FINSEC_SPECTRA_HPP

#include <finsec/errors.hpp>
#include <finsec/types.hpp>

#include <vector>

namespace finsec {

/// All singular values of a square matrix, nondecreasing.
/// Exactly Hermitian input is routed through the symmetric eigensolver;
/// otherwise a dense SVD runs (real path when the matrix is exactly real).
RealVector singular_values(const ComplexMatrix& M);

/// Largest singular value (0 for the empty matrix).
double spectral_norm(const ComplexMatrix& M);

/// Real eigenvalues with multiplicity, nondecreasing. Throws
/// NotSelfAdjointError when max |M - M^*| exceeds tol * max(1, max|M|).
RealVector sym_eigenvalues(const ComplexMatrix& M, double tol = 1e-10);

/// Number of entries strictly inside the open interval (lo, hi); values
/// within `snap` of an endpoint count as sitting on it and are excluded.
long count_in_interval(const RealVector& values, double lo, double hi,
                       double snap = 1e-10);

/// Hausdorff distance between finite nonempty point sets.
double hausdorff(const std::vector<Complex>& L, const std::vector<Complex>& M);
double hausdorff(const RealVector& L, const RealVector& M);

/// Eigenvalue multiset of one member of a matrix sequence.
struct SpectrumSet {
    Index n = 0;
    std::vector<Complex> values;
};

struct LimitingSets {
    std::vector<Complex> upper; // points hit by >= 2 distinct tail indices
    std::vector<Complex> lower; // points hit by every tail index
};

/// Finite-horizon proxies for the partial and uniform limiting sets:
/// cluster the points of the tail-window sets with radius eps; a cluster
/// centroid enters `upper` when it receives points from at least two
/// distinct indices (one when the window is a singleton) and `lower` when
/// it receives points from every index of the window.
LimitingSets limiting_sets(const std::vector<SpectrumSet>& sets, double eps,
                           double tail_fraction);

/// Ordered singular values over a sampled horizon. Row i belongs to
/// sizes[i] and lists sigma_1 <= ... <= sigma_{delta(n)}.
struct SingularProfile {
    std::vector<Index> sizes;
    std::vector<RealVector> rows;

    std::size_t count() const { return sizes.size(); }

    /// k-th smallest singular value at sample i (k is 1-based).
    double sv_ascending(std::size_t i, Index k) const { return rows[i](k - 1); }

    /// k-th largest singular value at sample i (k is 1-based).
    double sv_descending(std::size_t i, Index k) const {
        return rows[i](rows[i].size() - k);
    }

    Index min_dimension() const;
};

} // namespace finsec

#endif
