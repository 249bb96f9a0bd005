//
// Module      : symbols
// Description : trigonometric polynomial generating functions on the unit
//               circle: evaluation, argument flip, products, sup-norm and
//               winding number.
//
#ifndef FINSEC_SYMBOLS_HPP
#define FINSEC_SYMBOLS_HPP

#include <finsec/errors.hpp>
#include <finsec/types.hpp>

#include <initializer_list>
#include <map>
#include <string>
#include <utility>

namespace finsec {

/// Finitely supported map frequency -> complex coefficient. Zero
/// coefficients are canonicalized away, so equality is map equality.
class FourierSymbol {
public:
    FourierSymbol() = default;

    FourierSymbol(std::initializer_list<std::pair<const int, Complex>> items) {
        for (const auto& [k, c] : items) set(k, c);
    }

    static FourierSymbol monomial(int frequency, Complex coefficient = 1.0) {
        FourierSymbol a;
        a.set(frequency, coefficient);
        return a;
    }

    FourierSymbol& set(int frequency, Complex value) {
        if (value == Complex(0.0, 0.0)) {
            coeffs_.erase(frequency);
        } else {
            coeffs_[frequency] = value;
        }
        return *this;
    }

    FourierSymbol& add(int frequency, Complex value) {
        return set(frequency, coefficient(frequency) + value);
    }

    Complex coefficient(int frequency) const {
        auto it = coeffs_.find(frequency);
        return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
    }

    const std::map<int, Complex>& coefficients() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }

    int min_frequency() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    int max_frequency() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    /// Largest |frequency| of the support.
    int bandwidth() const {
        int lo = min_frequency(), hi = max_frequency();
        return std::max(lo < 0 ? -lo : lo, hi < 0 ? -hi : hi);
    }

    friend bool operator==(const FourierSymbol&, const FourierSymbol&) = default;

private:
    std::map<int, Complex> coeffs_;
};

/// Pointwise value a(e^{i theta}) = sum_k a_k e^{ik theta}.
Complex evaluate(const FourierSymbol& a, double theta);

/// Argument flip: coefficient of the result at k is the input coefficient
/// at -k.
FourierSymbol flip(const FourierSymbol& a);

/// Symbol of the adjoint operator: coefficient at k is conj of the input
/// coefficient at -k.
FourierSymbol conjugate_symbol(const FourierSymbol& a);

/// Coefficient convolution (pointwise product of the functions).
FourierSymbol multiply(const FourierSymbol& a, const FourierSymbol& b);

FourierSymbol operator*(const FourierSymbol& a, const FourierSymbol& b);
FourierSymbol operator+(const FourierSymbol& a, const FourierSymbol& b);
FourierSymbol operator-(const FourierSymbol& a, const FourierSymbol& b);
FourierSymbol operator*(Complex scale, const FourierSymbol& a);

/// Total argument increment of a around the circle divided by 2*pi, by
/// phase unwrapping over `samples` equispaced points. Throws
/// ZeroOnCircleError if any sampled |a| < zero_tol.
int winding_number(const FourierSymbol& a, int samples = 4096,
                   double zero_tol = 1e-9);

/// Max of |a| over `samples` equispaced points; requires
/// samples >= 2 * bandwidth + 1.
double sup_norm(const FourierSymbol& a, int samples = 4096);

/// Compact display such as "{-1:(1,0), 0:(2,0)}" for labels and reports.
std::string to_string(const FourierSymbol& a);

/// Symbol with coefficients drawn uniformly from [-1,1]^2 on frequencies
/// -degree..degree (deterministic in the rng state).
FourierSymbol random_symbol(SplitMix64& rng, int degree);

} // namespace finsec

#endif
