#include "ringrec/raster_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ringrec {

namespace {

void put_f32_le(std::vector<unsigned char>& out, float f) {
    uint32_t u = std::bit_cast<uint32_t>(f);
    out.push_back(static_cast<unsigned char>(u & 0xff));
    out.push_back(static_cast<unsigned char>((u >> 8) & 0xff));
    out.push_back(static_cast<unsigned char>((u >> 16) & 0xff));
    out.push_back(static_cast<unsigned char>((u >> 24) & 0xff));
}

float get_f32_le(const unsigned char* p) {
    uint32_t u = static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
                 (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
    return std::bit_cast<float>(u);
}

}  // namespace

void write_raster(const Grid2D& grid, const std::filesystem::path& path) {
    if (grid.rows() < 1 || grid.cols() < 1) fail("write_raster: empty grid for " + path.string());
    grid.require_finite("write_raster(" + path.string() + ")");

    std::string header = "SRF1 f32 2 " + std::to_string(grid.rows()) + " " +
                         std::to_string(grid.cols()) + "\n";
    std::vector<unsigned char> payload;
    payload.reserve(grid.size() * 4);
    for (double v : grid.values()) put_f32_le(payload, static_cast<float>(v));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail("write_raster: cannot open " + path.string());
    f.write(header.data(), static_cast<std::streamsize>(header.size()));
    f.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!f) fail("write_raster: I/O failure writing " + path.string());
}

Grid2D read_raster(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("read_raster: cannot open " + path.string());

    std::string header;
    if (!std::getline(f, header)) fail("read_raster: missing header in " + path.string());
    std::istringstream hs(header);
    std::string magic, dtype;
    long long ndim = -1, rows = -1, cols = -1;
    hs >> magic >> dtype >> ndim >> rows >> cols;
    if (magic != "SRF1") fail("read_raster: bad magic '" + magic + "' in " + path.string());
    if (dtype != "f32") fail("read_raster: bad dtype '" + dtype + "' in " + path.string());
    if (ndim != 2) fail("read_raster: bad ndim in " + path.string());
    if (rows < 1 || cols < 1)
        fail("read_raster: bad dims " + std::to_string(rows) + "x" + std::to_string(cols) +
             " in " + path.string());
    std::string rest;
    hs >> rest;
    if (!rest.empty()) fail("read_raster: trailing header tokens in " + path.string());

    size_t count = static_cast<size_t>(rows) * static_cast<size_t>(cols);
    std::vector<unsigned char> payload(count * 4);
    f.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (static_cast<size_t>(f.gcount()) != payload.size())
        fail("read_raster: payload shorter than header dims in " + path.string());
    char extra;
    if (f.read(&extra, 1))
        fail("read_raster: trailing bytes after payload in " + path.string());

    std::vector<double> data(count);
    for (size_t i = 0; i < count; ++i) data[i] = get_f32_le(payload.data() + i * 4);
    Grid2D grid = Grid2D::from_data(static_cast<int>(rows), static_cast<int>(cols), std::move(data));
    grid.require_finite("read_raster(" + path.string() + ")");
    return grid;
}

namespace {

// PNM token reader: skips whitespace and '#' comments.
std::string pnm_token(std::istream& in, const std::string& path) {
    int c = in.get();
    for (;;) {
        while (c != EOF && std::isspace(c)) c = in.get();
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        break;
    }
    if (c == EOF) fail("read_pgm: truncated header in " + path);
    std::string tok;
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

}  // namespace

Grid2D read_pgm(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("read_pgm: cannot open " + path.string());

    std::string magic = pnm_token(f, path.string());
    if (magic != "P5") fail("read_pgm: magic '" + magic + "' is not P5 in " + path.string());
    long long cols = std::stoll(pnm_token(f, path.string()));
    long long rows = std::stoll(pnm_token(f, path.string()));
    long long maxval = std::stoll(pnm_token(f, path.string()));
    if (cols < 1 || rows < 1) fail("read_pgm: bad dimensions in " + path.string());
    if (maxval < 1 || maxval > 65535) fail("read_pgm: bad maxval " + std::to_string(maxval) + " in " + path.string());

    const int bytes = maxval > 255 ? 2 : 1;
    size_t count = static_cast<size_t>(rows) * static_cast<size_t>(cols);
    std::vector<unsigned char> raw(count * bytes);
    f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(f.gcount()) != raw.size())
        fail("read_pgm: truncated pixel data in " + path.string());

    std::vector<double> data(count);
    const double scale = 1.0 / static_cast<double>(maxval);
    if (bytes == 1) {
        for (size_t i = 0; i < count; ++i) data[i] = raw[i] * scale;
    } else {
        // two-byte samples are big-endian per the PNM spec
        for (size_t i = 0; i < count; ++i) {
            unsigned v = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
            data[i] = v * scale;
        }
    }
    return Grid2D::from_data(static_cast<int>(rows), static_cast<int>(cols), std::move(data));
}

}  // namespace ringrec
