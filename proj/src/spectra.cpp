#include <finsec/spectra.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace finsec {

namespace {

bool exactly_hermitian(const ComplexMatrix& M) {
    return M.adjoint().isApprox(M, 0.0);
}

bool exactly_real(const ComplexMatrix& M) {
    return M.imag().isZero(0.0);
}

RealVector ascending_from_svd(RealVector vals) {
    std::sort(vals.data(), vals.data() + vals.size());
    return vals;
}

} // namespace

RealVector singular_values(const ComplexMatrix& M) {
    if (M.rows() != M.cols()) {
        throw std::invalid_argument("singular_values: matrix not square");
    }
    if (M.rows() == 0) return RealVector();
    if (exactly_hermitian(M)) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(M, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericalBreakdownError("singular_values: eigensolver failed");
        }
        return ascending_from_svd(es.eigenvalues().cwiseAbs());
    }
    if (exactly_real(M)) {
        Eigen::BDCSVD<RealMatrix> svd(M.real());
        if (svd.info() != Eigen::Success) {
            throw NumericalBreakdownError("singular_values: SVD failed");
        }
        return ascending_from_svd(svd.singularValues());
    }
    Eigen::BDCSVD<ComplexMatrix> svd(M);
    if (svd.info() != Eigen::Success) {
        throw NumericalBreakdownError("singular_values: SVD failed");
    }
    return ascending_from_svd(svd.singularValues());
}

double spectral_norm(const ComplexMatrix& M) {
    if (M.rows() == 0 || M.cols() == 0) return 0.0;
    if (M.rows() == M.cols()) {
        const RealVector sv = singular_values(M);
        return sv(sv.size() - 1);
    }
    Eigen::BDCSVD<ComplexMatrix> svd(M);
    return svd.singularValues()(0);
}

RealVector sym_eigenvalues(const ComplexMatrix& M, double tol) {
    if (M.rows() != M.cols()) {
        throw std::invalid_argument("sym_eigenvalues: matrix not square");
    }
    if (M.rows() == 0) return RealVector();
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
        throw NotSelfAdjointError("sym_eigenvalues: matrix is not self-adjoint");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalBreakdownError("sym_eigenvalues: eigensolver failed");
    }
    return es.eigenvalues();
}

long count_in_interval(const RealVector& values, double lo, double hi,
                       double snap) {
    if (!(lo < hi)) {
        throw std::invalid_argument("count_in_interval: need lo < hi");
    }
    long count = 0;
    for (Index i = 0; i < values.size(); ++i) {
        double v = values(i);
        if (std::abs(v - lo) <= snap) v = lo;
        if (std::abs(v - hi) <= snap) v = hi;
        if (lo < v && v < hi) ++count;
    }
    return count;
}

namespace {

double one_sided(const std::vector<Complex>& from, const std::vector<Complex>& to) {
    double worst = 0.0;
    for (const Complex& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const Complex& q : to) best = std::min(best, std::abs(p - q));
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

double hausdorff(const std::vector<Complex>& L, const std::vector<Complex>& M) {
    if (L.empty() || M.empty()) {
        throw EmptySetError("hausdorff: point sets must be nonempty");
    }
    return std::max(one_sided(L, M), one_sided(M, L));
}

double hausdorff(const RealVector& L, const RealVector& M) {
    std::vector<Complex> l(L.data(), L.data() + L.size());
    std::vector<Complex> m(M.data(), M.data() + M.size());
    return hausdorff(l, m);
}

LimitingSets limiting_sets(const std::vector<SpectrumSet>& sets, double eps,
                           double tail_fraction) {
    if (eps <= 0.0) throw std::invalid_argument("limiting_sets: eps must be positive");
    if (tail_fraction <= 0.0 || tail_fraction > 1.0) {
        throw std::invalid_argument("limiting_sets: tail fraction in (0,1] required");
    }
    LimitingSets out;
    if (sets.empty()) return out;

    const std::size_t window =
        std::max<std::size_t>(1, static_cast<std::size_t>(
            std::ceil(tail_fraction * static_cast<double>(sets.size()))));
    const std::size_t first = sets.size() - window;

    // Bucket the tail points into eps-sized grid cells; each occupied cell
    // contributes one candidate point (the mean of its members).
    struct Cell {
        Complex sum{0.0, 0.0};
        std::size_t count = 0;
    };
    std::map<std::pair<long long, long long>, Cell> cells;
    for (std::size_t s = first; s < sets.size(); ++s) {
        for (const Complex& z : sets[s].values) {
            const auto key = std::make_pair(
                static_cast<long long>(std::floor(z.real() / eps)),
                static_cast<long long>(std::floor(z.imag() / eps)));
            Cell& c = cells[key];
            c.sum += z;
            c.count += 1;
        }
    }
    if (cells.empty()) return out;

    // A candidate is supported by a window index when that spectrum comes
    // within eps of it; membership by distance absorbs cell-boundary jitter.
    const std::size_t upper_need = std::min<std::size_t>(2, window);
    for (const auto& [key, cell] : cells) {
        const Complex candidate = cell.sum / static_cast<double>(cell.count);
        std::size_t support = 0;
        for (std::size_t s = first; s < sets.size(); ++s) {
            for (const Complex& z : sets[s].values) {
                if (std::abs(z - candidate) <= eps) {
                    ++support;
                    break;
                }
            }
        }
        if (support >= upper_need) out.upper.push_back(candidate);
        if (support == window) out.lower.push_back(candidate);
    }
    auto ordering = [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(out.upper.begin(), out.upper.end(), ordering);
    std::sort(out.lower.begin(), out.lower.end(), ordering);
    return out;
}

Index SingularProfile::min_dimension() const {
    Index m = std::numeric_limits<Index>::max();
    for (const RealVector& row : rows) m = std::min<Index>(m, row.size());
    return rows.empty() ? 0 : m;
}

} // namespace finsec
