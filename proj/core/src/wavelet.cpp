#include "ringrec/wavelet.hpp"

#include <array>
#include <cmath>

#include "ringrec/grid.hpp"

namespace ringrec {

namespace {

const std::array<double, 2> kHaar = {0.7071067811865476, 0.7071067811865476};

// Daubechies 4-tap, exact closed form (1 +/- sqrt 3)/(4 sqrt 2).
const std::array<double, 4> kDb2 = {
    0.48296291314453414, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037};

// Daubechies 8-tap extremal-phase filter.
const std::array<double, 8> kDb4 = {
    0.23037781330885523, 0.7148465705525415,   0.6308807679295904,   -0.02798376941698385,
    -0.18703481171888114, 0.030841381835986965, 0.032883011666982945, -0.010597401784997278};

}  // namespace

Wavelet wavelet_from_name(const std::string& name) {
    if (name == "haar") return Wavelet::haar;
    if (name == "db2") return Wavelet::db2;
    if (name == "db4") return Wavelet::db4;
    fail("unknown wavelet '" + name + "' (supported: haar, db2, db4)");
}

std::string wavelet_name(Wavelet w) {
    switch (w) {
        case Wavelet::haar: return "haar";
        case Wavelet::db2: return "db2";
        case Wavelet::db4: return "db4";
    }
    return "?";
}

std::span<const double> wavelet_filter(Wavelet w) {
    switch (w) {
        case Wavelet::haar: return kHaar;
        case Wavelet::db2: return kDb2;
        case Wavelet::db4: return kDb4;
    }
    return kHaar;
}

void dwt_periodic(std::span<const double> in, std::span<double> approx, std::span<double> detail,
                  Wavelet w) {
    const int n = static_cast<int>(in.size());
    if (n < 2 || n % 2 != 0) fail("dwt_periodic: length must be even and >= 2");
    if (approx.size() != in.size() / 2 || detail.size() != in.size() / 2)
        fail("dwt_periodic: output spans must have length n/2");
    const auto h = wavelet_filter(w);
    const int L = static_cast<int>(h.size());
    for (int k = 0; k < n / 2; ++k) {
        double a = 0.0, d = 0.0;
        for (int m = 0; m < L; ++m) {
            const double x = in[(2 * k + m) % n];
            a += h[m] * x;
            // quadrature mirror filter g[m] = (-1)^m h[L-1-m]
            const double gm = (m % 2 == 0 ? 1.0 : -1.0) * h[L - 1 - m];
            d += gm * x;
        }
        approx[k] = a;
        detail[k] = d;
    }
}

void idwt_periodic(std::span<const double> approx, std::span<const double> detail,
                   std::span<double> out, Wavelet w) {
    const int half = static_cast<int>(approx.size());
    const int n = 2 * half;
    if (detail.size() != approx.size()) fail("idwt_periodic: approx/detail length mismatch");
    if (static_cast<int>(out.size()) != n) fail("idwt_periodic: output span must have length 2*n/2");
    const auto h = wavelet_filter(w);
    const int L = static_cast<int>(h.size());
    for (int i = 0; i < n; ++i) out[i] = 0.0;
    // transpose of the analysis operator
    for (int k = 0; k < half; ++k) {
        for (int m = 0; m < L; ++m) {
            const int i = (2 * k + m) % n;
            const double gm = (m % 2 == 0 ? 1.0 : -1.0) * h[L - 1 - m];
            out[i] += h[m] * approx[k] + gm * detail[k];
        }
    }
}

}  // namespace ringrec
