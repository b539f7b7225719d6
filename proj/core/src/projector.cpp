#include "ringrec/projector.hpp"

#include <cmath>
#include <vector>

#include "ringrec/rng.hpp"
#include "ringrec/threading.hpp"

namespace ringrec {

namespace {

// Traverses one ray with Joseph's method and hands (pixel, weight) pairs to
// the sink. Weights include the step length, so sum(w * pixel) is the line
// integral in mu*mm. The traversal order is fixed (ascending dominant-axis
// index), making gather and scatter bit-reproducible.
template <typename Sink>
inline void joseph_walk(const FanBeamGeometry& g, const Ray& ray, Sink&& sink) {
    const int n = g.image_size;
    const double px = g.pixel_size;
    const double half = 0.5 * (n - 1);

    if (std::abs(ray.dx) >= std::abs(ray.dy)) {
        const double step = px / std::abs(ray.dx);
        const double slope = ray.dy / ray.dx;
        for (int c = 0; c < n; ++c) {
            const double xc = (c - half) * px;
            const double y = ray.oy + (xc - ray.ox) * slope;
            const double rf = half - y / px;  // row coordinate, row 0 on top
            const double fl = std::floor(rf);
            const int r0 = static_cast<int>(fl);
            const double w1 = rf - fl;
            if (r0 >= 0 && r0 < n) sink(r0, c, (1.0 - w1) * step);
            if (r0 + 1 >= 0 && r0 + 1 < n && w1 != 0.0) sink(r0 + 1, c, w1 * step);
        }
    } else {
        const double step = px / std::abs(ray.dy);
        const double slope = ray.dx / ray.dy;
        for (int r = 0; r < n; ++r) {
            const double yr = (half - r) * px;
            const double x = ray.ox + (yr - ray.oy) * slope;
            const double cf = x / px + half;
            const double fl = std::floor(cf);
            const int c0 = static_cast<int>(fl);
            const double w1 = cf - fl;
            if (c0 >= 0 && c0 < n) sink(r, c0, (1.0 - w1) * step);
            if (c0 + 1 >= 0 && c0 + 1 < n && w1 != 0.0) sink(r, c0 + 1, w1 * step);
        }
    }
}

void check_image_dims(const Grid2D& x, const FanBeamGeometry& g, const char* who) {
    if (x.rows() != g.image_size || x.cols() != g.image_size)
        fail(std::string(who) + ": image dims " + std::to_string(x.rows()) + "x" +
             std::to_string(x.cols()) + " do not match geometry image_size " +
             std::to_string(g.image_size));
}

void check_sino_dims(const Grid2D& s, const FanBeamGeometry& g, const char* who) {
    if (s.rows() != g.n_views || s.cols() != g.n_detectors)
        fail(std::string(who) + ": sinogram dims " + std::to_string(s.rows()) + "x" +
             std::to_string(s.cols()) + " do not match geometry " +
             std::to_string(g.n_views) + "x" + std::to_string(g.n_detectors));
}

constexpr int kViewBlock = 16;  // back-projection reduction block, fixed

}  // namespace

void forward_project_add(const Grid2D& x, const FanBeamGeometry& g, Grid2D& out) {
    check_image_dims(x, g, "forward_project");
    check_sino_dims(out, g, "forward_project");
    const double* img = x.data();
    const int n = g.image_size;
    parallel_for(g.n_views, 4, [&](int64_t vb, int64_t ve) {
        for (int v = static_cast<int>(vb); v < ve; ++v) {
            double* row = out.row(v);
            for (int d = 0; d < g.n_detectors; ++d) {
                const Ray ray = ray_for(g, v, d);
                double acc = 0.0;
                joseph_walk(g, ray, [&](int r, int c, double w) { acc += w * img[r * n + c]; });
                row[d] += acc;
            }
        }
    });
}

Grid2D forward_project(const Grid2D& x, const FanBeamGeometry& g) {
    Grid2D out(g.n_views, g.n_detectors, 0.0);
    forward_project_add(x, g, out);
    return out;
}

void back_project_add(const Grid2D& sino, const FanBeamGeometry& g, Grid2D& out) {
    check_sino_dims(sino, g, "back_project");
    check_image_dims(out, g, "back_project");
    const int n = g.image_size;
    const int n_blocks = (g.n_views + kViewBlock - 1) / kViewBlock;

    // Scatter per fixed view-block into private buffers, then reduce in block
    // order. Identical arithmetic for every thread count.
    std::vector<Grid2D> partial(n_blocks);
    parallel_for(n_blocks, 1, [&](int64_t bb, int64_t be) {
        for (int b = static_cast<int>(bb); b < be; ++b) {
            Grid2D acc(n, n, 0.0);
            double* buf = acc.data();
            const int v_end = std::min((b + 1) * kViewBlock, g.n_views);
            for (int v = b * kViewBlock; v < v_end; ++v) {
                const double* row = sino.row(v);
                for (int d = 0; d < g.n_detectors; ++d) {
                    const double val = row[d];
                    if (val == 0.0) continue;
                    const Ray ray = ray_for(g, v, d);
                    joseph_walk(g, ray, [&](int r, int c, double w) { buf[r * n + c] += w * val; });
                }
            }
            partial[b] = std::move(acc);
        }
    });
    double* o = out.data();
    for (int b = 0; b < n_blocks; ++b) {
        const double* p = partial[b].data();
        for (size_t i = 0; i < out.size(); ++i) o[i] += p[i];
    }
}

Grid2D back_project(const Grid2D& sino, const FanBeamGeometry& g) {
    Grid2D out(g.image_size, g.image_size, 0.0);
    back_project_add(sino, g, out);
    return out;
}

double operator_norm_estimate(const FanBeamGeometry& g, int iterations) {
    SeededRng rng(0x9e3779b9ULL, 0x7f4a7c15ULL);
    Grid2D x(g.image_size, g.image_size);
    for (double& v : x.values()) v = rng.uniform01() - 0.5;
    double sigma = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Grid2D s = forward_project(x, g);
        Grid2D y = back_project(s, g);
        double norm = 0.0;
        for (double v : y.values()) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        sigma = std::sqrt(norm);  // ||A^T A x|| -> lambda_max, sigma = sqrt
        for (size_t i = 0; i < x.size(); ++i) x.data()[i] = y.data()[i] / norm;
    }
    return sigma;
}

}  // namespace ringrec
