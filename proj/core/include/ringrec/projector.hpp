#pragma once

#include "ringrec/geometry.hpp"
#include "ringrec/grid.hpp"

namespace ringrec {

// Joseph's method: the image is sampled along each ray at the pixel-grid
// planes of the dominant axis with linear interpolation across the other
// axis. forward_project and back_project are exact transposes of each other
// (same traversal, gather vs scatter), which the unrolled solver's gradient
// checks rely on.
//
// Both functions are pure and thread-count invariant: the accumulation order
// is fixed by the geometry alone.

// x: image_size x image_size attenuation image -> n_views x n_detectors
// sinogram of line integrals in mu*mm.
Grid2D forward_project(const Grid2D& x, const FanBeamGeometry& g);

// Exact adjoint: n_views x n_detectors -> image.
Grid2D back_project(const Grid2D& sino, const FanBeamGeometry& g);

// Accumulating variants used by hot loops (out += op(in)).
void forward_project_add(const Grid2D& x, const FanBeamGeometry& g, Grid2D& out);
void back_project_add(const Grid2D& sino, const FanBeamGeometry& g, Grid2D& out);

// Largest singular value of the projector, by power iteration on A^T A with
// a fixed seed. Deterministic; used to scale the learned gradient step.
double operator_norm_estimate(const FanBeamGeometry& g, int iterations = 30);

}  // namespace ringrec
