#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ringrec/grid.hpp"
#include "ringrec/rng.hpp"

namespace testutil {

inline ringrec::Grid2D random_grid(int rows, int cols, ringrec::SeededRng& rng, double lo = -1.0,
                                   double hi = 1.0) {
    ringrec::Grid2D g(rows, cols);
    for (double& v : g.values()) v = rng.uniform(lo, hi);
    return g;
}

inline double dot(const ringrec::Grid2D& a, const ringrec::Grid2D& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * b.data()[i];
    return acc;
}

inline double norm2(const ringrec::Grid2D& a) { return std::sqrt(dot(a, a)); }

inline double max_abs_diff(const ringrec::Grid2D& a, const ringrec::Grid2D& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline double rms_diff(const ringrec::Grid2D& a, const ringrec::Grid2D& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        acc += d * d;
    }
    return std::sqrt(acc / a.size());
}

// Unique scratch directory per test binary run, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        base_ = std::filesystem::temp_directory_path() /
                ("ringrec_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(base_);
        std::filesystem::create_directories(base_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(base_, ec);
    }
    std::filesystem::path path(const std::string& name) const { return base_ / name; }
    const std::filesystem::path& dir() const { return base_; }

private:
    std::filesystem::path base_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace testutil
