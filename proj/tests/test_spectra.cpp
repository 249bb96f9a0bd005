#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <finsec/matgen.hpp>
#include <finsec/spectra.hpp>

#include <Eigen/QR>

#include <cmath>
#include <numbers>

using namespace finsec;

namespace {

constexpr double pi = std::numbers::pi;

ComplexMatrix random_matrix(SplitMix64& rng, Index n) {
    ComplexMatrix M(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            M(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
    }
    return M;
}

ComplexMatrix random_hermitian(SplitMix64& rng, Index n) {
    const ComplexMatrix M = random_matrix(rng, n);
    return ComplexMatrix((M + M.adjoint()) / 2.0);
}

// Analytic eigenvalues of the tridiagonal 0/1 Toeplitz truncation.
RealVector tridiagonal_eigenvalues(Index n) {
    RealVector v(n);
    for (Index k = 1; k <= n; ++k) {
        v(n - k) = 2.0 * std::cos(k * pi / static_cast<double>(n + 1));
    }
    return v;
}

} // namespace

TEST_CASE("singular values of simple matrices") {
    CHECK(singular_values(ComplexMatrix::Zero(3, 3)).isZero(0.0));

    const RealVector shift_sv = singular_values(toeplitz(FourierSymbol::monomial(1), 3));
    RealVector want(3);
    want << 0, 1, 1;
    CHECK(shift_sv.isApprox(want, 1e-14));

    // unitary matrices have all singular values one
    SplitMix64 rng(2);
    const ComplexMatrix M = random_matrix(rng, 8);
    Eigen::HouseholderQR<ComplexMatrix> qr(M);
    const ComplexMatrix Q = qr.householderQ();
    const RealVector sv = singular_values(Q);
    CHECK((sv.array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("singular values are nondecreasing and match the norm") {
    SplitMix64 rng(4);
    const ComplexMatrix M = random_matrix(rng, 12);
    const RealVector sv = singular_values(M);
    for (Index i = 0; i + 1 < sv.size(); ++i) CHECK(sv(i) <= sv(i + 1));
    CHECK(sv(sv.size() - 1) == doctest::Approx(spectral_norm(M)));
}

TEST_CASE("sym_eigenvalues on closed forms") {
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    RealVector want(3);
    want << 0, 1, 3;
    CHECK(sym_eigenvalues(d).isApprox(want, 1e-14));

    ComplexMatrix f(2, 2);
    f << 0, 1, 1, 0;
    RealVector pm(2);
    pm << -1, 1;
    CHECK(sym_eigenvalues(f).isApprox(pm, 1e-14));

    for (Index n : {4, 25}) {
        const ComplexMatrix tri = toeplitz(FourierSymbol{{1, 1.0}, {-1, 1.0}}, n);
        CHECK((sym_eigenvalues(tri) - tridiagonal_eigenvalues(n))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
}

TEST_CASE("sym_eigenvalues rejects non-hermitian input") {
    CHECK_THROWS_AS(sym_eigenvalues(toeplitz(FourierSymbol::monomial(1), 4)),
                    NotSelfAdjointError);
}

TEST_CASE("count_in_interval with endpoint snapping") {
    RealVector v(3);
    v << 0, 1, 3;
    CHECK(count_in_interval(v, -0.5, 0.5) == 1);
    RealVector w(2);
    w << -1, 1;
    CHECK(count_in_interval(w, -2, 2) == 2);
    CHECK_THROWS_AS(count_in_interval(v, 1.0, 1.0), std::invalid_argument);

    // endpoint and near-endpoint values are excluded by the snap
    RealVector e(3);
    e << 1.0, 1.0 + 5e-11, 1.0 + 1e-6;
    CHECK(count_in_interval(e, 1.0, 2.0) == 1);
}

TEST_CASE("hausdorff distance basics") {
    CHECK(hausdorff({Complex(0, 0)}, {Complex(1, 0)}) == doctest::Approx(1.0));
    CHECK(hausdorff({Complex(0, 0), Complex(1, 0)}, {Complex(0, 0)}) ==
          doctest::Approx(1.0));
    const std::vector<Complex> m{Complex(0.5, 0), Complex(-1, 2)};
    CHECK(hausdorff(m, m) == 0.0);
    CHECK_THROWS_AS(hausdorff({}, m), EmptySetError);
}

TEST_CASE("hausdorff symmetry and triangle inequality") {
    SplitMix64 rng(31);
    auto random_set = [&](int count) {
        std::vector<Complex> s;
        for (int i = 0; i < count; ++i) {
            s.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2));
        }
        return s;
    };
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_set(4), b = random_set(6), c = random_set(3);
        CHECK(hausdorff(a, b) == doctest::Approx(hausdorff(b, a)));
        CHECK(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12);
    }
}

TEST_CASE("perturbation moves singular values by at most the perturbation norm") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 6; ++trial) {
        const ComplexMatrix M = random_matrix(rng, 10);
        const ComplexMatrix E = 0.05 * random_matrix(rng, 10);
        const RealVector a = singular_values(M);
        const RealVector b = singular_values(M + E);
        const double bound = spectral_norm(E) + 1e-12;
        CHECK((a - b).cwiseAbs().maxCoeff() <= bound);
    }
}

TEST_CASE("leading-block eigenvalues interlace") {
    SplitMix64 rng(16);
    for (int trial = 0; trial < 6; ++trial) {
        const ComplexMatrix M = random_hermitian(rng, 9);
        const RealVector outer = sym_eigenvalues(M);
        const RealVector inner = sym_eigenvalues(M.topLeftCorner(8, 8));
        CHECK(interlaces(inner, outer, 1e-10));
    }
}

TEST_CASE("limiting sets on constant and alternating data") {
    std::vector<SpectrumSet> constant;
    for (Index n = 1; n <= 6; ++n) {
        constant.push_back({n, {Complex(0, 0), Complex(1, 0)}});
    }
    const LimitingSets cs = limiting_sets(constant, 0.1, 1.0);
    REQUIRE(cs.upper.size() == 2);
    REQUIRE(cs.lower.size() == 2);
    CHECK(std::abs(cs.lower[0]) < 1e-12);
    CHECK(std::abs(cs.lower[1] - Complex(1, 0)) < 1e-12);

    std::vector<SpectrumSet> alternating;
    for (Index n = 1; n <= 6; ++n) {
        alternating.push_back({n, {Complex(n % 2 ? 0.0 : 1.0, 0)}});
    }
    const LimitingSets as = limiting_sets(alternating, 0.1, 1.0);
    CHECK(as.upper.size() == 2);
    CHECK(as.lower.empty());
}

TEST_CASE("limiting sets of tridiagonal spectra cover the interval") {
    std::vector<SpectrumSet> sets;
    for (Index n = 200; n <= 800; n += 150) {
        const RealVector ev = tridiagonal_eigenvalues(n);
        SpectrumSet s;
        s.n = n;
        for (Index i = 0; i < ev.size(); ++i) s.values.emplace_back(ev(i), 0.0);
        sets.push_back(std::move(s));
    }
    const double eps = 0.1;
    const LimitingSets ls = limiting_sets(sets, eps, 1.0);
    REQUIRE(!ls.lower.empty());
    for (double x = -2.0; x <= 2.0; x += 0.05) {
        double best = 1e300;
        for (const Complex& z : ls.lower) {
            best = std::min(best, std::abs(z - Complex(x, 0)));
        }
        CHECK(best <= eps);
    }
}
