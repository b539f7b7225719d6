#pragma once

#include <cmath>
#include <vector>

#include "ringrec/grid.hpp"
#include "ringrec/rng.hpp"

namespace ringrec {

// Per-detector non-ideal response: a gain factor eta per detector (1 = ideal)
// and a validity mask (0 = dead detector). Responses are constant across
// views; a detector may be both rescaled and dead, in which case the mask
// wins.
struct DetectorResponse {
    std::vector<double> eta_ir;   // in [0.75, 1.25]
    std::vector<double> mask_im;  // 0 or 1

    int n_detectors() const { return static_cast<int>(eta_ir.size()); }
    static DetectorResponse ideal(int n_detectors);
    void validate() const;
};

// Draws floor(ir_fraction*D) distinct detectors with eta ~ U[ir_lo, ir_hi]
// (others 1), and independently floor(im_fraction*D) distinct dead detectors.
DetectorResponse sample_response(SeededRng& rng, int n_detectors, double ir_fraction,
                                 double im_fraction, double ir_lo, double ir_hi);

// Log-domain corruption of a single sample; shared between apply_corruption
// and the solver's modified forward operator so the two match bit for bit.
// Dead detectors read exactly 0 whatever their eta.
inline double corrupt_sample(double s, double eta, double mask) {
    return mask == 0.0 ? 0.0 : mask * (-std::log(eta) + s);
}

// S'[v,d] = mask[d] * (-ln eta[d] + S[v,d]). Errors if eta <= 0 on a live
// detector (dead detectors must be expressed via the mask, not eta = 0).
Grid2D apply_corruption(const Grid2D& sino, const DetectorResponse& r);

}  // namespace ringrec
