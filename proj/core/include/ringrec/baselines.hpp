#pragma once

#include "ringrec/grid.hpp"
#include "ringrec/wavelet.hpp"

namespace ringrec {

// Detector-mean normalization (Rivers-style), additive in the log domain:
// subtract from each column the deviation of its view-mean from a moving
// average over detectors (window odd, edge-clamped).
Grid2D norm_correct(const Grid2D& sino, int smoothing_window);

// Wavelet-Fourier stripe removal: multilevel 1-D DWT along the detector axis
// of every view, then in each detail band an FFT along the view axis with
// low view-frequency damping 1 - exp(-f^2 / (2 sigma^2)).
Grid2D wavefft_correct(const Grid2D& sino, int levels, double sigma, Wavelet wavelet);

// Per-detector mean over views and its moving-average smoothing; exposed for
// the stripe-energy measurements in tests and evaluation.
std::vector<double> detector_means(const Grid2D& sino);
std::vector<double> moving_average(const std::vector<double>& v, int window);

}  // namespace ringrec
