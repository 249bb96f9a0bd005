#include <finsec/symbols.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace finsec {

Complex evaluate(const FourierSymbol& a, double theta) {
    Complex sum(0.0, 0.0);
    for (const auto& [k, c] : a.coefficients()) {
        sum += c * std::polar(1.0, k * theta);
    }
    return sum;
}

FourierSymbol flip(const FourierSymbol& a) {
    FourierSymbol out;
    for (const auto& [k, c] : a.coefficients()) out.set(-k, c);
    return out;
}

FourierSymbol conjugate_symbol(const FourierSymbol& a) {
    FourierSymbol out;
    for (const auto& [k, c] : a.coefficients()) out.set(-k, std::conj(c));
    return out;
}

FourierSymbol multiply(const FourierSymbol& a, const FourierSymbol& b) {
    FourierSymbol out;
    for (const auto& [ka, ca] : a.coefficients()) {
        for (const auto& [kb, cb] : b.coefficients()) {
            out.add(ka + kb, ca * cb);
        }
    }
    return out;
}

FourierSymbol operator*(const FourierSymbol& a, const FourierSymbol& b) {
    return multiply(a, b);
}

FourierSymbol operator+(const FourierSymbol& a, const FourierSymbol& b) {
    FourierSymbol out = a;
    for (const auto& [k, c] : b.coefficients()) out.add(k, c);
    return out;
}

FourierSymbol operator-(const FourierSymbol& a, const FourierSymbol& b) {
    FourierSymbol out = a;
    for (const auto& [k, c] : b.coefficients()) out.add(k, -c);
    return out;
}

FourierSymbol operator*(Complex scale, const FourierSymbol& a) {
    FourierSymbol out;
    for (const auto& [k, c] : a.coefficients()) out.set(k, scale * c);
    return out;
}

int winding_number(const FourierSymbol& a, int samples, double zero_tol) {
    if (samples < 2) throw std::invalid_argument("winding_number: samples < 2");
    const double two_pi = 2.0 * std::numbers::pi;
    double total = 0.0;
    Complex prev = evaluate(a, 0.0);
    if (std::abs(prev) < zero_tol) {
        throw ZeroOnCircleError("winding_number: |a| below tolerance at theta=0");
    }
    for (int j = 1; j <= samples; ++j) {
        const double theta = two_pi * static_cast<double>(j) / samples;
        const Complex cur = evaluate(a, theta);
        if (std::abs(cur) < zero_tol) {
            throw ZeroOnCircleError("winding_number: |a| below tolerance at theta=" +
                                    std::to_string(theta));
        }
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / two_pi));
}

double sup_norm(const FourierSymbol& a, int samples) {
    if (samples < 2 * a.bandwidth() + 1) {
        throw std::invalid_argument("sup_norm: samples must be >= 2*bandwidth+1");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    double best = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double theta = two_pi * static_cast<double>(j) / samples;
        best = std::max(best, std::abs(evaluate(a, theta)));
    }
    return best;
}

std::string to_string(const FourierSymbol& a) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [k, c] : a.coefficients()) {
        if (!first) os << ", ";
        first = false;
        os << k << ":(" << c.real() << ',' << c.imag() << ')';
    }
    os << '}';
    return os.str();
}

FourierSymbol random_symbol(SplitMix64& rng, int degree) {
    FourierSymbol a;
    for (int k = -degree; k <= degree; ++k) {
        const double re = rng.uniform(-1.0, 1.0);
        const double im = rng.uniform(-1.0, 1.0);
        a.set(k, Complex(re, im));
    }
    return a;
}

} // namespace finsec
