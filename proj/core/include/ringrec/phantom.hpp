#pragma once

#include <span>

#include "ringrec/grid.hpp"
#include "ringrec/rng.hpp"

namespace ringrec {

// Ellipse in the unit square [-1,1]^2; value adds to overlapping pixels.
struct Ellipse {
    double value;
    double a, b;        // semi-axes
    double x0, y0;      // center
    double angle_deg;   // counter-clockwise rotation
};

// Renders by sampling pixel centers (supersample=1) or a supersample x
// supersample grid per pixel (area-averaged, antialiased).
Grid2D render_ellipses(std::span<const Ellipse> ellipses, int size, int supersample = 1);

// Standard ten-ellipse head phantom, rescaled so the maximum is mu_max
// (default 0.5) and the background is 0.
Grid2D shepp_phantom(int size, double mu_max = 0.5);

// Antialiased uniform disk centered at the iso-center.
Grid2D disk_phantom(int size, double pixel_size_mm, double radius_mm, double mu,
                    int supersample = 8);

// Smooth isotropic Gaussian bump, amplitude at the center.
Grid2D gaussian_blob(int size, double pixel_size_mm, double sigma_mm, double amplitude,
                     double cx_mm = 0.0, double cy_mm = 0.0);

// Random piecewise ellipse-and-blob composition in [0,1]; the grayscale
// source used when no natural-image corpus is available.
Grid2D random_soft_phantom(int size, SeededRng& rng);

}  // namespace ringrec
