#include "ringrec/fft.hpp"

#include <cmath>
#include <numbers>

#include "ringrec/grid.hpp"

namespace ringrec {

namespace {
bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
int next_pow2(int n) {
    int m = 1;
    while (m < n) m <<= 1;
    return m;
}
}  // namespace

void Fft::pow2_fft(std::vector<std::complex<double>>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    // bit reversal permutation
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (int len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * std::numbers::pi / len;
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

Fft::Fft(int n) : n_(n), pow2_(is_pow2(n)) {
    if (n < 1) fail("Fft: length must be >= 1");
    if (pow2_) return;
    m_ = next_pow2(2 * n_ - 1);
    chirp_.resize(n_);
    for (int k = 0; k < n_; ++k) {
        // k^2 mod 2n keeps the angle argument small for large n
        long long k2 = (static_cast<long long>(k) * k) % (2LL * n_);
        double ang = std::numbers::pi * static_cast<double>(k2) / n_;
        chirp_[k] = std::complex<double>(std::cos(ang), -std::sin(ang));
    }
    std::vector<std::complex<double>> b(m_, {0.0, 0.0});
    b[0] = std::conj(chirp_[0]);
    for (int k = 1; k < n_; ++k) {
        b[k] = std::conj(chirp_[k]);
        b[m_ - k] = std::conj(chirp_[k]);
    }
    pow2_fft(b, false);
    b_spec_ = std::move(b);
}

void Fft::transform(std::vector<std::complex<double>>& a, bool inverse) const {
    if (static_cast<int>(a.size()) != n_) fail("Fft: input length mismatch");
    if (n_ == 1) return;
    if (pow2_) {
        pow2_fft(a, inverse);
        if (inverse) {
            for (auto& x : a) x /= static_cast<double>(n_);
        }
        return;
    }
    // Bluestein: X_k = conj(w_k) * IFFT(FFT(a.*w) .* B)_k
    // An inverse transform is the conjugated forward transform.
    if (inverse) {
        for (auto& x : a) x = std::conj(x);
    }
    std::vector<std::complex<double>> tmp(m_, {0.0, 0.0});
    for (int k = 0; k < n_; ++k) tmp[k] = a[k] * chirp_[k];
    pow2_fft(tmp, false);
    for (int k = 0; k < m_; ++k) tmp[k] *= b_spec_[k];
    pow2_fft(tmp, true);
    const double inv_m = 1.0 / m_;
    for (int k = 0; k < n_; ++k) a[k] = tmp[k] * inv_m * chirp_[k];
    if (inverse) {
        const double inv_n = 1.0 / n_;
        for (auto& x : a) x = std::conj(x) * inv_n;
    }
}

}  // namespace ringrec
