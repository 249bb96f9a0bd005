#include <finsec/identities.hpp>

#include <finsec/spectra.hpp>

#include <cmath>

namespace finsec {

namespace {

// Residual norm, skipping the SVD when the difference is exactly zero.
double residual_norm(const ComplexMatrix& R) {
    if (R.isZero(0.0)) return 0.0;
    return spectral_norm(R);
}

double residual_norm(const RealMatrix& R) {
    if (R.isZero(0.0)) return 0.0;
    return spectral_norm(R.cast<Complex>());
}

Index positive_degree(const FourierSymbol& a) {
    return std::max(0, a.max_frequency());
}

} // namespace

ComplexMatrix hankel_product(const FourierSymbol& a, const FourierSymbol& b,
                             Index n) {
    if (n < 1) throw std::invalid_argument("hankel_product: n must be positive");
    const Index m = std::max<Index>(positive_degree(a), positive_degree(b));
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    if (m == 0) return out;
    const ComplexMatrix block = hankel(a, m) * hankel(b, m);
    const Index c = std::min(n, m);
    out.topLeftCorner(c, c) = block.topLeftCorner(c, c);
    return out;
}

IdentityReport widom_check(const FourierSymbol& a, const FourierSymbol& b,
                           Index n) {
    IdentityReport rep;
    rep.name = "widom";
    rep.sizes = {n};
    const ComplexMatrix lhs = toeplitz(multiply(a, b), n);
    const ComplexMatrix rhs = toeplitz(a, n) * toeplitz(b, n) +
                              hankel_product(a, flip(b), n) +
                              reflect_conjugate(hankel_product(flip(a), b, n));
    rep.max_residual = residual_norm(ComplexMatrix(lhs - rhs));
    rep.bound = 1e-12 * (1.0 + sup_norm(a) * sup_norm(b));
    rep.pass = rep.max_residual <= rep.bound;
    return rep;
}

IdentityReport reflection_check(const FourierSymbol& a, Index n) {
    IdentityReport rep;
    rep.name = "reflection";
    rep.sizes = {n};
    const ComplexMatrix lhs = reflect_conjugate(toeplitz(a, n));
    const ComplexMatrix rhs = toeplitz(flip(a), n);
    rep.max_residual = residual_norm(ComplexMatrix(lhs - rhs));
    rep.bound = 1e-14;
    rep.pass = rep.max_residual <= rep.bound;
    return rep;
}

IdentityReport cuntz_relations_check(int N, Index n) {
    IdentityReport rep;
    rep.name = "cuntz_relations[N=" + std::to_string(N) + "]";
    rep.sizes = {n};
    std::vector<RealMatrix> M;
    M.reserve(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) M.push_back(cuntz_isometry(N, i, n));

    double worst = 0.0;
    RealMatrix range_sum = RealMatrix::Zero(n, n);
    for (int i = 0; i < N; ++i) {
        range_sum.noalias() += M[static_cast<std::size_t>(i)] *
                               M[static_cast<std::size_t>(i)].transpose();
        // partial isometry: M M^T M = M
        const RealMatrix& Mi = M[static_cast<std::size_t>(i)];
        worst = std::max(worst, residual_norm(RealMatrix(Mi * Mi.transpose() * Mi - Mi)));
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            worst = std::max(worst,
                             residual_norm(RealMatrix(
                                 Mi.transpose() * M[static_cast<std::size_t>(j)])));
        }
    }
    worst = std::max(worst, residual_norm(RealMatrix(
                                range_sum - RealMatrix::Identity(n, n))));
    rep.max_residual = worst;
    rep.bound = 1e-14;
    rep.pass = rep.max_residual <= rep.bound;
    return rep;
}

Index cuntz_projection_cutoff(int N, const std::vector<int>& word, Index n) {
    if (word.empty()) throw std::invalid_argument("cuntz word must be nonempty");
    long long v = 0;
    long long power = 1;
    for (int letter : word) {
        if (letter < 0 || letter >= N) {
            throw std::invalid_argument("cuntz word letter out of range");
        }
        v += static_cast<long long>(letter) * power;
        power *= N;
    }
    // power is now N^k; ceiling of (n - v) / N^k clamped to [0, n].
    const long long num = static_cast<long long>(n) - v;
    long long m = 0;
    if (num > 0) m = (num + power - 1) / power;
    if (m < 0) m = 0;
    if (m > n) m = n;
    return static_cast<Index>(m);
}

IdentityReport cuntz_projection_check(int N, const std::vector<int>& word,
                                      Index n) {
    IdentityReport rep;
    rep.name = "cuntz_projection[N=" + std::to_string(N) + ",k=" +
               std::to_string(word.size()) + "]";
    rep.sizes = {n};
    RealMatrix W = RealMatrix::Identity(n, n);
    for (int letter : word) W = W * cuntz_isometry(N, letter, n);
    const Index m = cuntz_projection_cutoff(N, word, n);
    RealMatrix P = RealMatrix::Zero(n, n);
    for (Index j = 0; j < m; ++j) P(j, j) = 1.0;
    rep.max_residual = residual_norm(RealMatrix(W.transpose() * W - P));
    rep.bound = 1e-14;
    rep.pass = rep.max_residual <= rep.bound;
    return rep;
}

IdentityReport norm_formula_check(const FourierSymbol& a, const Horizon& horizon,
                                  double bound) {
    IdentityReport rep;
    rep.name = "norm_formula";
    rep.sizes = horizon.sizes();
    if (rep.sizes.empty()) {
        throw std::invalid_argument("norm_formula_check: empty horizon");
    }
    const double target = sup_norm(a);
    const double at_largest = spectral_norm(toeplitz(a, rep.sizes.back()));
    rep.max_residual = std::abs(at_largest - target);
    rep.bound = bound;
    rep.pass = rep.max_residual <= rep.bound;
    return rep;
}

} // namespace finsec
