#ifndef FINSEC_TYPES_HPP
#define FINSEC_TYPES_HPP

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <vector>

namespace finsec {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Arithmetic sampling grid n_min, n_min+step, ..., <= n_max.
struct Horizon {
    Index n_min = 0;
    Index n_max = 0;
    Index step = 1;

    std::vector<Index> sizes() const {
        std::vector<Index> out;
        if (n_min < 1 || step < 1 || n_max < n_min) return out;
        for (Index n = n_min; n <= n_max; n += step) out.push_back(n);
        return out;
    }
    bool empty() const { return sizes().empty(); }
};

/// Deterministic pseudo-random stream, identical on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::uint64_t state_;
};

} // namespace finsec

#endif
