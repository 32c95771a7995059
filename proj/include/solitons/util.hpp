#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace solitons {

// Bad input: preconditions, malformed files, out-of-domain evaluation.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to converge or produced a degenerate result.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(double x) { return std::isfinite(x); }

// Deterministic 64-bit generator (splitmix64). The standard library engines
// are portable but the distributions are not, so draws are produced by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::uint64_t state_;
};

constexpr std::uint64_t kDefaultSeed = 0x50117045ULL;

// One Richardson step for a quantity with leading error C*h^p, evaluated at
// h and h/ratio.
inline double richardson_step(double coarse, double fine, double ratio, double order) {
    const double k = std::pow(ratio, order);
    return (k * fine - coarse) / (k - 1.0);
}

// Extrapolates values[i] = Q + C*h_i^p + o(h_i^p) with h_{i+1} = h_i/ratio,
// applying one Richardson level per pair and recursing.
inline double richardson_extrapolate(std::vector<double> values, double ratio, double order) {
    if (values.empty()) throw ValidationError("richardson_extrapolate: empty ladder");
    double p = order;
    while (values.size() > 1) {
        std::vector<double> next(values.size() - 1);
        for (std::size_t i = 0; i + 1 < values.size(); ++i)
            next[i] = richardson_step(values[i], values[i + 1], ratio, p);
        values = std::move(next);
        p += 1.0;
    }
    return values[0];
}

// Observed convergence order from three values on a step ladder with fixed
// refinement ratio: log(|v0-v1| / |v1-v2|) / log(ratio).
inline double observed_order(double v0, double v1, double v2, double ratio) {
    const double d01 = std::abs(v0 - v1);
    const double d12 = std::abs(v1 - v2);
    if (d12 == 0.0 || d01 == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::log(d01 / d12) / std::log(ratio);
}

// Central difference of a callable, step scaled as the profile invariants state.
template <class F>
double central_difference(F&& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

inline double rel_err(double value, double reference) {
    return std::abs(value - reference) / (1.0 + std::abs(reference));
}

}  // namespace solitons
