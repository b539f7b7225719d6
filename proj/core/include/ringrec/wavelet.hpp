#pragma once

#include <span>
#include <string>
#include <vector>

namespace ringrec {

enum class Wavelet { haar, db2, db4 };

Wavelet wavelet_from_name(const std::string& name);
std::string wavelet_name(Wavelet w);

// Orthonormal scaling filter taps.
std::span<const double> wavelet_filter(Wavelet w);

// One level of the periodized orthogonal DWT of an even-length signal:
// approx/detail each of length n/2. Perfect reconstruction with idwt_periodic.
void dwt_periodic(std::span<const double> in, std::span<double> approx, std::span<double> detail,
                  Wavelet w);
void idwt_periodic(std::span<const double> approx, std::span<const double> detail,
                   std::span<double> out, Wavelet w);

}  // namespace ringrec
