#pragma once

#include <string>

#include "ringrec/corruption.hpp"
#include "ringrec/geometry.hpp"
#include "ringrec/grid.hpp"
#include "ringrec/rng.hpp"

namespace ringrec {

// Bilinear resampling onto an out_rows x out_cols grid (edge-clamped).
Grid2D resize_bilinear(const Grid2D& src, int out_rows, int out_cols);

// Turns a [0,1] grayscale image into a CT-like attenuation map: resize to
// image_size, mask with the inscribed circle, rescale so the maximum equals
// mu_max drawn uniformly from [mu_lo, mu_hi]. All-zero input stays zero.
Grid2D make_ct_like(const Grid2D& gray01, int image_size, SeededRng& rng, double mu_lo = 0.5,
                    double mu_hi = 0.7);

struct SynthesisParams {
    double ir_fraction = 0.75;
    double im_fraction = 0.02;
    double ir_lo = 0.75;
    double ir_hi = 1.25;
    double mu_lo = 0.5;
    double mu_hi = 0.7;
};

// One (clean image, corrupted sinogram, response) training pair. Regenerating
// with the same (seed, stream) reproduces every field bit-exactly.
struct TrainingSample {
    Grid2D x_clean;
    Grid2D y_corrupt;
    DetectorResponse response;
    std::string geometry_id;
    uint64_t seed = 0;    // rng seed
    uint64_t stream = 0;  // rng stream (one per augmentation)
};

TrainingSample generate_pair(const Grid2D& gray_source, const FanBeamGeometry& g,
                             const std::string& geometry_id, uint64_t seed, uint64_t stream,
                             const SynthesisParams& params = {});

}  // namespace ringrec
