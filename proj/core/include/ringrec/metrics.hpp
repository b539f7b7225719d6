#pragma once

#include <vector>

#include "ringrec/grid.hpp"

namespace ringrec {

inline constexpr double kMuWater = 0.268;  // mu of water, per mm; air is 0

// HU = 1000 * (mu - mu_water) / (mu_water - mu_air)
Grid2D mu_to_hu(const Grid2D& x);
Grid2D hu_to_mu(const Grid2D& hu);

// 1 inside the inscribed circle (radius size/2 pixels around the image
// center), 0 outside. Metrics are restricted to this region.
std::vector<uint8_t> inscribed_circle_mask(int size);

// Metrics over the masked region (empty mask = whole image). psnr returns
// +inf for identical inputs. ssim uses an 11x11 Gaussian window, sigma 1.5,
// C1=(0.01 R)^2, C2=(0.03 R)^2.
double mae(const Grid2D& a, const Grid2D& b, const std::vector<uint8_t>& mask = {});
double psnr(const Grid2D& a, const Grid2D& b, double data_range,
            const std::vector<uint8_t>& mask = {});
double ssim(const Grid2D& a, const Grid2D& b, double data_range,
            const std::vector<uint8_t>& mask = {});

}  // namespace ringrec
