#include "ringrec/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ringrec/fft.hpp"

namespace ringrec {

std::vector<double> detector_means(const Grid2D& sino) {
    std::vector<double> m(sino.cols(), 0.0);
    for (int v = 0; v < sino.rows(); ++v) {
        const double* row = sino.row(v);
        for (int d = 0; d < sino.cols(); ++d) m[d] += row[d];
    }
    const double inv = 1.0 / sino.rows();
    for (double& x : m) x *= inv;
    return m;
}

std::vector<double> moving_average(const std::vector<double>& v, int window) {
    const int n = static_cast<int>(v.size());
    const int hw = window / 2;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = -hw; k <= hw; ++k) {
            acc += v[std::clamp(i + k, 0, n - 1)];
        }
        out[i] = acc / window;
    }
    return out;
}

Grid2D norm_correct(const Grid2D& sino, int smoothing_window) {
    if (smoothing_window < 1 || smoothing_window % 2 == 0 || smoothing_window > sino.cols())
        fail("norm_correct: window must be odd, >= 1 and <= n_detectors");
    const std::vector<double> m = detector_means(sino);
    const std::vector<double> sm = moving_average(m, smoothing_window);
    Grid2D out(sino.rows(), sino.cols());
    for (int v = 0; v < sino.rows(); ++v) {
        const double* src = sino.row(v);
        double* dst = out.row(v);
        for (int d = 0; d < sino.cols(); ++d) dst[d] = src[d] - (m[d] - sm[d]);
    }
    return out;
}

Grid2D wavefft_correct(const Grid2D& sino, int levels, double sigma, Wavelet wavelet) {
    if (levels < 1) fail("wavefft_correct: levels must be >= 1");
    if ((1 << levels) > sino.cols()) fail("wavefft_correct: 2^levels exceeds n_detectors");
    if (!(sigma > 0.0)) fail("wavefft_correct: sigma must be > 0");

    const int n_views = sino.rows();
    const int n_det = sino.cols();

    // Pad the detector axis (symmetric reflection) to a multiple of 2^levels
    // so every level stays even-length for the periodized DWT.
    const int unit = 1 << levels;
    const int padded = ((n_det + unit - 1) / unit) * unit;
    Grid2D work(n_views, padded, 0.0);
    for (int v = 0; v < n_views; ++v) {
        const double* src = sino.row(v);
        double* dst = work.row(v);
        for (int d = 0; d < padded; ++d) {
            const int m = d < n_det ? d : 2 * n_det - 1 - d;  // reflect
            dst[d] = src[std::clamp(m, 0, n_det - 1)];
        }
    }

    // Decompose every view along the detector axis. Bands are stored packed:
    // [A_L | D_L | D_{L-1} | ... | D_1] with D_l of length padded/2^l.
    std::vector<double> tmp_a(padded), tmp_d(padded);
    for (int v = 0; v < n_views; ++v) {
        double* row = work.row(v);
        int len = padded;
        for (int l = 0; l < levels; ++l) {
            std::span<const double> in(row, static_cast<size_t>(len));
            dwt_periodic(in, std::span<double>(tmp_a.data(), len / 2),
                         std::span<double>(tmp_d.data(), len / 2), wavelet);
            std::copy_n(tmp_a.data(), len / 2, row);
            std::copy_n(tmp_d.data(), len / 2, row + len / 2);
            len /= 2;
        }
    }

    // Damp low view frequencies of every detail coefficient column.
    // Column index range [padded/2^L, padded) covers all detail bands.
    Fft fft(n_views);
    std::vector<std::complex<double>> col(n_views);
    std::vector<double> damp(n_views);
    for (int f = 0; f < n_views; ++f) {
        const int ff = std::min(f, n_views - f);  // two-sided frequency index
        damp[f] = 1.0 - std::exp(-static_cast<double>(ff) * ff / (2.0 * sigma * sigma));
    }
    const int detail_begin = padded >> levels;
    for (int k = detail_begin; k < padded; ++k) {
        for (int v = 0; v < n_views; ++v) col[v] = work(v, k);
        fft.forward(col);
        for (int v = 0; v < n_views; ++v) col[v] *= damp[v];
        fft.inverse(col);
        for (int v = 0; v < n_views; ++v) work(v, k) = col[v].real();
    }

    // Reconstruct and crop the padding.
    for (int v = 0; v < n_views; ++v) {
        double* row = work.row(v);
        int len = padded >> levels;
        for (int l = 0; l < levels; ++l) {
            idwt_periodic(std::span<const double>(row, static_cast<size_t>(len)),
                          std::span<const double>(row + len, static_cast<size_t>(len)),
                          std::span<double>(tmp_a.data(), static_cast<size_t>(2 * len)), wavelet);
            std::copy_n(tmp_a.data(), 2 * len, row);
            len *= 2;
        }
    }
    Grid2D out(n_views, n_det);
    for (int v = 0; v < n_views; ++v) {
        const double* src = work.row(v);
        double* dst = out.row(v);
        for (int d = 0; d < n_det; ++d) dst[d] = src[d];
    }
    return out;
}

}  // namespace ringrec
