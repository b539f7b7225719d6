#pragma once

#include <cmath>

namespace ringrec {

// Shared by the tape ops and the plain inference path so both produce
// bit-identical values.

inline double stable_softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

inline double softplus_inv(double y) { return std::log(std::expm1(y)); }

inline double sigmoid_fn(double x) {
    if (x >= 0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline constexpr double kInstanceNormEps = 1e-5;

}  // namespace ringrec
