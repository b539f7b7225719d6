#include "ringrec/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace ringrec {

namespace {

void check_pair(const Grid2D& a, const Grid2D& b, const std::vector<uint8_t>& mask,
                const char* who) {
    if (!a.same_shape(b)) fail(std::string(who) + ": shape mismatch");
    if (!mask.empty() && mask.size() != a.size())
        fail(std::string(who) + ": mask size mismatch");
}

// 11x11 Gaussian, sigma 1.5, normalized.
const std::vector<double>& ssim_window() {
    static const std::vector<double> w = [] {
        std::vector<double> v(11);
        double sum = 0.0;
        for (int i = 0; i < 11; ++i) {
            const double d = i - 5;
            v[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
            sum += v[i];
        }
        for (double& x : v) x /= sum;
        return v;
    }();
    return w;
}

// Separable Gaussian blur with reflected borders.
Grid2D gauss_blur(const Grid2D& img) {
    const auto& w = ssim_window();
    const int n = static_cast<int>(w.size()), hw = n / 2;
    const int R = img.rows(), C = img.cols();
    auto reflect = [](int i, int lim) {
        if (i < 0) i = -i - 1;
        if (i >= lim) i = 2 * lim - 1 - i;
        return i;
    };
    Grid2D tmp(R, C), out(R, C);
    for (int r = 0; r < R; ++r) {
        for (int c = 0; c < C; ++c) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += w[k] * img(r, reflect(c + k - hw, C));
            tmp(r, c) = acc;
        }
    }
    for (int r = 0; r < R; ++r) {
        for (int c = 0; c < C; ++c) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += w[k] * tmp(reflect(r + k - hw, R), c);
            out(r, c) = acc;
        }
    }
    return out;
}

}  // namespace

Grid2D mu_to_hu(const Grid2D& x) {
    Grid2D out = x;
    const double scale = 1000.0 / kMuWater;
    for (double& v : out.values()) v = (v - kMuWater) * scale;
    return out;
}

Grid2D hu_to_mu(const Grid2D& hu) {
    Grid2D out = hu;
    const double scale = kMuWater / 1000.0;
    for (double& v : out.values()) v = v * scale + kMuWater;
    return out;
}

std::vector<uint8_t> inscribed_circle_mask(int size) {
    std::vector<uint8_t> m(static_cast<size_t>(size) * size, 0);
    const double half = 0.5 * (size - 1);
    const double r2 = 0.25 * static_cast<double>(size) * size;
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            const double dy = r - half, dx = c - half;
            if (dy * dy + dx * dx <= r2) m[static_cast<size_t>(r) * size + c] = 1;
        }
    }
    return m;
}

double mae(const Grid2D& a, const Grid2D& b, const std::vector<uint8_t>& mask) {
    check_pair(a, b, mask, "mae");
    double acc = 0.0;
    size_t n = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        acc += std::abs(a.data()[i] - b.data()[i]);
        ++n;
    }
    return n == 0 ? 0.0 : acc / n;
}

double psnr(const Grid2D& a, const Grid2D& b, double data_range,
            const std::vector<uint8_t>& mask) {
    check_pair(a, b, mask, "psnr");
    if (!(data_range > 0)) fail("psnr: data_range must be > 0");
    double acc = 0.0;
    size_t n = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        const double d = a.data()[i] - b.data()[i];
        acc += d * d;
        ++n;
    }
    if (n == 0 || acc == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(data_range * data_range * n / acc);
}

double ssim(const Grid2D& a, const Grid2D& b, double data_range,
            const std::vector<uint8_t>& mask) {
    check_pair(a, b, mask, "ssim");
    if (!(data_range > 0)) fail("ssim: data_range must be > 0");
    const double c1 = (0.01 * data_range) * (0.01 * data_range);
    const double c2 = (0.03 * data_range) * (0.03 * data_range);

    Grid2D a2(a.rows(), a.cols()), b2(a.rows(), a.cols()), ab(a.rows(), a.cols());
    for (size_t i = 0; i < a.size(); ++i) {
        a2.data()[i] = a.data()[i] * a.data()[i];
        b2.data()[i] = b.data()[i] * b.data()[i];
        ab.data()[i] = a.data()[i] * b.data()[i];
    }
    const Grid2D mu_a = gauss_blur(a), mu_b = gauss_blur(b);
    const Grid2D m_a2 = gauss_blur(a2), m_b2 = gauss_blur(b2), m_ab = gauss_blur(ab);

    double acc = 0.0;
    size_t n = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        const double ma = mu_a.data()[i], mb = mu_b.data()[i];
        const double va = m_a2.data()[i] - ma * ma;
        const double vb = m_b2.data()[i] - mb * mb;
        const double cov = m_ab.data()[i] - ma * mb;
        const double s = ((2 * ma * mb + c1) * (2 * cov + c2)) /
                         ((ma * ma + mb * mb + c1) * (va + vb + c2));
        acc += s;
        ++n;
    }
    return n == 0 ? 1.0 : acc / n;
}

}  // namespace ringrec
