#include "ringrec/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace ringrec {

Grid2D render_ellipses(std::span<const Ellipse> ellipses, int size, int supersample) {
    if (size < 1) fail("render_ellipses: size must be >= 1");
    if (supersample < 1) supersample = 1;

    struct Prepared {
        double value, ca, sa, x0, y0, inv_a2, inv_b2;
    };
    std::vector<Prepared> prep;
    prep.reserve(ellipses.size());
    for (const auto& e : ellipses) {
        const double rad = e.angle_deg * std::numbers::pi / 180.0;
        prep.push_back({e.value, std::cos(rad), std::sin(rad), e.x0, e.y0,
                        1.0 / (e.a * e.a), 1.0 / (e.b * e.b)});
    }

    Grid2D img(size, size, 0.0);
    const double step = 2.0 / size;
    const double sub = step / supersample;
    const double w = 1.0 / (supersample * supersample);
    for (int r = 0; r < size; ++r) {
        const double ytop = 1.0 - r * step;
        for (int c = 0; c < size; ++c) {
            const double xleft = -1.0 + c * step;
            double acc = 0.0;
            for (int sy = 0; sy < supersample; ++sy) {
                const double y = ytop - (sy + 0.5) * sub;
                for (int sx = 0; sx < supersample; ++sx) {
                    const double x = xleft + (sx + 0.5) * sub;
                    for (const auto& e : prep) {
                        const double dx = x - e.x0, dy = y - e.y0;
                        const double u = dx * e.ca + dy * e.sa;
                        const double v = -dx * e.sa + dy * e.ca;
                        if (u * u * e.inv_a2 + v * v * e.inv_b2 <= 1.0) acc += e.value;
                    }
                }
            }
            img(r, c) = acc * w;
        }
    }
    return img;
}

Grid2D shepp_phantom(int size, double mu_max) {
    if (size < 16) fail("shepp_phantom: size must be >= 16");
    // Ten-ellipse head phantom (contrast-enhanced variant).
    static const Ellipse table[] = {
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
        {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
        {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
        {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
        {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
        {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
        {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
    };
    Grid2D img = render_ellipses(table, size, 1);
    // summed intensities like 1.0 - 0.8 - 0.2 leave rounding dust below zero
    for (double& v : img.values()) {
        if (v < 0.0) v = 0.0;
    }
    const double mx = img.max();
    if (mx > 0.0) {
        const double scale = mu_max / mx;
        for (double& v : img.values()) v *= scale;
    }
    return img;
}

Grid2D disk_phantom(int size, double pixel_size_mm, double radius_mm, double mu, int supersample) {
    if (supersample < 1) supersample = 1;
    Grid2D img(size, size, 0.0);
    const double half = 0.5 * (size - 1);
    const double r2 = radius_mm * radius_mm;
    const double sub = pixel_size_mm / supersample;
    const double w = mu / (supersample * supersample);
    for (int r = 0; r < size; ++r) {
        const double yc = (half - r) * pixel_size_mm;
        for (int c = 0; c < size; ++c) {
            const double xc = (c - half) * pixel_size_mm;
            double acc = 0.0;
            for (int sy = 0; sy < supersample; ++sy) {
                const double y = yc + (sy - 0.5 * (supersample - 1)) * sub;
                for (int sx = 0; sx < supersample; ++sx) {
                    const double x = xc + (sx - 0.5 * (supersample - 1)) * sub;
                    if (x * x + y * y <= r2) acc += 1.0;
                }
            }
            img(r, c) = acc * w;
        }
    }
    return img;
}

Grid2D gaussian_blob(int size, double pixel_size_mm, double sigma_mm, double amplitude,
                     double cx_mm, double cy_mm) {
    Grid2D img(size, size, 0.0);
    const double half = 0.5 * (size - 1);
    const double inv = 1.0 / (2.0 * sigma_mm * sigma_mm);
    for (int r = 0; r < size; ++r) {
        const double y = (half - r) * pixel_size_mm - cy_mm;
        for (int c = 0; c < size; ++c) {
            const double x = (c - half) * pixel_size_mm - cx_mm;
            img(r, c) = amplitude * std::exp(-(x * x + y * y) * inv);
        }
    }
    return img;
}

Grid2D random_soft_phantom(int size, SeededRng& rng) {
    // A handful of overlapping ellipses for structure plus Gaussian bumps for
    // texture, clipped to [0,1]. Stands in for natural grayscale images.
    const int n_ell = 3 + static_cast<int>(rng.bounded(6));
    std::vector<Ellipse> ells;
    ells.reserve(n_ell);
    ells.push_back({rng.uniform(0.3, 0.7), rng.uniform(0.5, 0.9), rng.uniform(0.5, 0.9),
                    rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(0.0, 180.0)});
    for (int i = 1; i < n_ell; ++i) {
        ells.push_back({rng.uniform(-0.4, 0.6), rng.uniform(0.05, 0.45), rng.uniform(0.05, 0.45),
                        rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), rng.uniform(0.0, 180.0)});
    }
    Grid2D img = render_ellipses(ells, size, 2);

    const int n_blob = 1 + static_cast<int>(rng.bounded(4));
    const double half = 0.5 * (size - 1);
    for (int i = 0; i < n_blob; ++i) {
        const double amp = rng.uniform(-0.3, 0.4);
        const double sig = rng.uniform(0.04, 0.25) * size;
        const double cx = rng.uniform(-0.6, 0.6) * half;
        const double cy = rng.uniform(-0.6, 0.6) * half;
        const double inv = 1.0 / (2.0 * sig * sig);
        for (int r = 0; r < size; ++r) {
            const double y = half - r - cy;
            for (int c = 0; c < size; ++c) {
                const double x = c - half - cx;
                img(r, c) += amp * std::exp(-(x * x + y * y) * inv);
            }
        }
    }
    for (double& v : img.values()) v = std::clamp(v, 0.0, 1.0);
    return img;
}

}  // namespace ringrec
