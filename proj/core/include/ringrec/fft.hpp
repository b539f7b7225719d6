#pragma once

#include <complex>
#include <vector>

namespace ringrec {

// Complex FFT of arbitrary length: iterative radix-2 for powers of two,
// Bluestein's chirp-z otherwise. Small and fully deterministic, which the
// byte-reproducibility contracts require.
class Fft {
public:
    explicit Fft(int n);

    int size() const { return n_; }
    void forward(std::vector<std::complex<double>>& a) const { transform(a, false); }
    // Inverse includes the 1/n normalization.
    void inverse(std::vector<std::complex<double>>& a) const { transform(a, true); }

private:
    void transform(std::vector<std::complex<double>>& a, bool inverse) const;
    static void pow2_fft(std::vector<std::complex<double>>& a, bool inverse);

    int n_;
    bool pow2_;
    int m_ = 0;  // padded pow2 length for Bluestein
    std::vector<std::complex<double>> chirp_;     // w_k = exp(-i*pi*k^2/n)
    std::vector<std::complex<double>> b_spec_;    // FFT of the chirp kernel, length m_
};

}  // namespace ringrec
