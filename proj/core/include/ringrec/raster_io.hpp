#pragma once

#include <filesystem>

#include "ringrec/grid.hpp"

namespace ringrec {

// SRF1 raster: ASCII header line "SRF1 f32 2 <rows> <cols>\n" followed by
// rows*cols little-endian 32-bit floats, row-major. In-memory values are
// doubles; writing narrows to f32.
void write_raster(const Grid2D& grid, const std::filesystem::path& path);
Grid2D read_raster(const std::filesystem::path& path);

// Binary PGM (magic P5), maxval in [1, 65535]; values scaled to [0,1].
Grid2D read_pgm(const std::filesystem::path& path);

}  // namespace ringrec
