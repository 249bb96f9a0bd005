//
// Module      : identities
// Description : machine-precision checks of the matrix equalities that hold
//               at every finite section size.
//
#ifndef FINSEC_IDENTITIES_HPP
#define FINSEC_IDENTITIES_HPP

#include <finsec/matgen.hpp>
#include <finsec/symbols.hpp>

#include <string>
#include <vector>

namespace finsec {

struct IdentityReport {
    std::string name;
    std::vector<Index> sizes;
    double max_residual = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// Leading n x n block of the product of the two (infinite) Hankel
/// matrices of a and b. Trig polynomials have finitely supported Hankel
/// parts, so the block is exact.
ComplexMatrix hankel_product(const FourierSymbol& a, const FourierSymbol& b,
                             Index n);

/// Truncated product identity
///   P_n T(ab) P_n = P_n T(a) P_n T(b) P_n + P_n H(a) H(flip b) P_n
///                   + R_n H(flip a) H(b) R_n.
/// Pass bound 1e-12 * (1 + sup_norm(a) * sup_norm(b)).
IdentityReport widom_check(const FourierSymbol& a, const FourierSymbol& b,
                           Index n);

/// Reversal conjugation of a Toeplitz truncation equals the truncation of
/// the flipped symbol. Pass bound 1e-14.
IdentityReport reflection_check(const FourierSymbol& a, Index n);

/// Orthogonality of distinct truncated isometries, completeness of the
/// range projections, and the partial-isometry identity, all at size n.
/// Entries are 0/1, so residuals are expected to be exactly 0.
IdentityReport cuntz_relations_check(int N, Index n);

/// Initial projection of a truncated isometry word against the predicted
/// projection P_m with m = ceil((n - v) / N^k) clamped to [0, n], where
/// v = i_1 + i_2 N + ... + i_k N^{k-1}.
IdentityReport cuntz_projection_check(int N, const std::vector<int>& word,
                                      Index n);

/// Predicted cutoff m for the word's initial projection at size n.
Index cuntz_projection_cutoff(int N, const std::vector<int>& word, Index n);

/// Norm of the largest truncation against the sup-norm of the symbol.
IdentityReport norm_formula_check(const FourierSymbol& a, const Horizon& horizon,
                                  double bound = 1e-2);

} // namespace finsec

#endif
