#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ringrec {

// Error type used across the library; the CLI turns these into one-line
// diagnostics and a nonzero exit code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

// Dense row-major 2D array of doubles. Carries the image (attenuation map),
// the sinogram (views x detectors) and any intermediate 2D quantity.
// Stored as 64-bit in memory, 32-bit on disk (see raster_io).
class Grid2D {
public:
    Grid2D() = default;
    Grid2D(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          data_(static_cast<size_t>(check_dims(rows, cols)), fill) {}

    static Grid2D from_data(int rows, int cols, std::vector<double> data) {
        if (static_cast<size_t>(check_dims(rows, cols)) != data.size())
            fail("Grid2D: data length " + std::to_string(data.size()) +
                 " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
        Grid2D g;
        g.rows_ = rows;
        g.cols_ = cols;
        g.data_ = std::move(data);
        return g;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(int r) { return data_.data() + static_cast<size_t>(r) * cols_; }
    const double* row(int r) const { return data_.data() + static_cast<size_t>(r) * cols_; }
    std::span<const double> values() const { return data_; }
    std::span<double> values() { return data_; }

    bool same_shape(const Grid2D& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    // Throws if any element is NaN/Inf; `what` names the offending quantity.
    void require_finite(const std::string& what) const;

    double min() const;
    double max() const;
    double sum() const;

private:
    static long long check_dims(int rows, int cols) {
        if (rows < 0 || cols < 0) fail("Grid2D: negative dimension");
        return static_cast<long long>(rows) * cols;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

}  // namespace ringrec
