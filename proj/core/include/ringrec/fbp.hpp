#pragma once

#include "ringrec/geometry.hpp"
#include "ringrec/grid.hpp"

namespace ringrec {

// Discrete Ram-Lak filtering of each row, circular at the row's own length.
// The frequency response is the DFT of the sampled band-limited ramp with the
// DC bin pinned to zero, so constant rows map to (numerically) zero.
// `spacing` is the sample spacing tau; the response scales as 1/tau^2.
void ramp_filter_rows(Grid2D& rows, double spacing);

// Fan-beam filtered back-projection for a full 2pi scan on a flat detector:
// cosine pre-weighting, Ram-Lak filtering along the detector axis (rows
// zero-padded to 2x length), distance-weighted pixel-driven back-projection.
// Scaled so fbp(forward_project(x)) ~= x for smooth x. Rejects short scans.
Grid2D fbp(const Grid2D& sino, const FanBeamGeometry& g);

// Exact adjoint of fbp as a linear operator (image -> sinogram). Needed when
// the FBP-preconditioned gradient step is differentiated.
Grid2D fbp_adjoint(const Grid2D& img, const FanBeamGeometry& g);

}  // namespace ringrec
