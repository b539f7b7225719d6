#include "ringrec/corruption.hpp"

#include <numeric>

namespace ringrec {

DetectorResponse DetectorResponse::ideal(int n_detectors) {
    DetectorResponse r;
    r.eta_ir.assign(n_detectors, 1.0);
    r.mask_im.assign(n_detectors, 1.0);
    return r;
}

void DetectorResponse::validate() const {
    if (eta_ir.size() != mask_im.size())
        fail("DetectorResponse: eta/mask length mismatch");
    for (size_t d = 0; d < eta_ir.size(); ++d) {
        if (!(eta_ir[d] >= 0.75 && eta_ir[d] <= 1.25))
            fail("DetectorResponse: eta out of [0.75, 1.25] at detector " + std::to_string(d));
        if (mask_im[d] != 0.0 && mask_im[d] != 1.0)
            fail("DetectorResponse: mask not binary at detector " + std::to_string(d));
    }
}

namespace {

// First k entries of a seeded partial Fisher-Yates shuffle of 0..n-1.
std::vector<int> choose_distinct(SeededRng& rng, int n, int k) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.bounded(static_cast<uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace

DetectorResponse sample_response(SeededRng& rng, int n_detectors, double ir_fraction,
                                 double im_fraction, double ir_lo, double ir_hi) {
    if (ir_fraction < 0 || ir_fraction > 1 || im_fraction < 0 || im_fraction > 1)
        fail("sample_response: fractions must be in [0,1]");
    if (!(ir_lo <= ir_hi) || ir_lo < 0.75 || ir_hi > 1.25)
        fail("sample_response: ir range must satisfy 0.75 <= lo <= hi <= 1.25");

    DetectorResponse r = DetectorResponse::ideal(n_detectors);
    const int n_ir = static_cast<int>(ir_fraction * n_detectors);
    for (int d : choose_distinct(rng, n_detectors, n_ir)) {
        r.eta_ir[d] = rng.uniform(ir_lo, ir_hi);
    }
    const int n_im = static_cast<int>(im_fraction * n_detectors);
    for (int d : choose_distinct(rng, n_detectors, n_im)) {
        r.mask_im[d] = 0.0;
    }
    return r;
}

Grid2D apply_corruption(const Grid2D& sino, const DetectorResponse& r) {
    if (sino.cols() != r.n_detectors())
        fail("apply_corruption: detector count mismatch (" + std::to_string(sino.cols()) +
             " vs " + std::to_string(r.n_detectors()) + ")");
    for (int d = 0; d < r.n_detectors(); ++d) {
        if (r.mask_im[d] != 0.0 && r.eta_ir[d] <= 0.0)
            fail("apply_corruption: eta <= 0 on live detector " + std::to_string(d) +
                 " (dead detectors must use the mask)");
    }
    Grid2D out(sino.rows(), sino.cols());
    for (int v = 0; v < sino.rows(); ++v) {
        const double* src = sino.row(v);
        double* dst = out.row(v);
        for (int d = 0; d < sino.cols(); ++d) {
            dst[d] = corrupt_sample(src[d], r.eta_ir[d], r.mask_im[d]);
        }
    }
    return out;
}

}  // namespace ringrec
