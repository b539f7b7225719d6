#include "ringrec/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "ringrec/projector.hpp"

namespace ringrec {

Grid2D resize_bilinear(const Grid2D& src, int out_rows, int out_cols) {
    if (src.empty()) fail("resize_bilinear: empty input");
    if (out_rows < 1 || out_cols < 1) fail("resize_bilinear: bad output dims");
    Grid2D out(out_rows, out_cols);
    const double sr = static_cast<double>(src.rows()) / out_rows;
    const double sc = static_cast<double>(src.cols()) / out_cols;
    for (int r = 0; r < out_rows; ++r) {
        // pixel-center mapping, clamped at the borders
        double fr = (r + 0.5) * sr - 0.5;
        fr = std::clamp(fr, 0.0, static_cast<double>(src.rows() - 1));
        const int r0 = static_cast<int>(fr);
        const int r1 = std::min(r0 + 1, src.rows() - 1);
        const double wr = fr - r0;
        for (int c = 0; c < out_cols; ++c) {
            double fc = (c + 0.5) * sc - 0.5;
            fc = std::clamp(fc, 0.0, static_cast<double>(src.cols() - 1));
            const int c0 = static_cast<int>(fc);
            const int c1 = std::min(c0 + 1, src.cols() - 1);
            const double wc = fc - c0;
            out(r, c) = (1 - wr) * ((1 - wc) * src(r0, c0) + wc * src(r0, c1)) +
                        wr * ((1 - wc) * src(r1, c0) + wc * src(r1, c1));
        }
    }
    return out;
}

Grid2D make_ct_like(const Grid2D& gray01, int image_size, SeededRng& rng, double mu_lo,
                    double mu_hi) {
    if (gray01.empty()) fail("make_ct_like: empty input");
    const double mu_max = rng.uniform(mu_lo, mu_hi);

    Grid2D img = resize_bilinear(gray01, image_size, image_size);

    // inscribed circle, radius image_size/2 pixels around the image center
    const double half = 0.5 * (image_size - 1);
    const double r2 = 0.25 * static_cast<double>(image_size) * image_size;
    for (int r = 0; r < image_size; ++r) {
        for (int c = 0; c < image_size; ++c) {
            const double dy = r - half, dx = c - half;
            if (dy * dy + dx * dx > r2) img(r, c) = 0.0;
        }
    }

    const double mx = img.max();
    if (mx <= 0.0) return img;  // all-zero input: nothing to rescale
    const double scale = mu_max / mx;
    for (double& v : img.values()) v *= scale;
    return img;
}

TrainingSample generate_pair(const Grid2D& gray_source, const FanBeamGeometry& g,
                             const std::string& geometry_id, uint64_t seed, uint64_t stream,
                             const SynthesisParams& params) {
    SeededRng rng(seed, stream);
    TrainingSample s;
    s.geometry_id = geometry_id;
    s.seed = seed;
    s.stream = stream;
    s.x_clean = make_ct_like(gray_source, g.image_size, rng, params.mu_lo, params.mu_hi);
    s.response = sample_response(rng, g.n_detectors, params.ir_fraction, params.im_fraction,
                                 params.ir_lo, params.ir_hi);
    const Grid2D clean_sino = forward_project(s.x_clean, g);
    s.y_corrupt = apply_corruption(clean_sino, s.response);
    return s;
}

}  // namespace ringrec
