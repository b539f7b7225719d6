#pragma once

#include <cstdint>
#include <vector>

#include "ringrec/grid.hpp"

namespace ringrec {

// Flat dense tensor of doubles with a small shape vector. Scalars use {1}.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> v;

    Tensor() = default;

    static Tensor zeros(std::vector<int> s) {
        Tensor t;
        t.shape = std::move(s);
        t.v.assign(static_cast<size_t>(count(t.shape)), 0.0);
        return t;
    }
    static Tensor scalar(double x) {
        Tensor t;
        t.shape = {1};
        t.v = {x};
        return t;
    }
    static Tensor from_grid(const Grid2D& g) {
        Tensor t;
        t.shape = {g.rows(), g.cols()};
        t.v.assign(g.data(), g.data() + g.size());
        return t;
    }
    static Tensor from_vector(const std::vector<double>& x) {
        Tensor t;
        t.shape = {static_cast<int>(x.size())};
        t.v = x;
        return t;
    }

    Grid2D to_grid() const {
        if (shape.size() != 2) fail("Tensor::to_grid: not 2-D");
        return Grid2D::from_data(shape[0], shape[1], v);
    }

    int64_t size() const { return static_cast<int64_t>(v.size()); }
    int ndim() const { return static_cast<int>(shape.size()); }
    int dim(int i) const { return shape[static_cast<size_t>(i)]; }
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }

    static int64_t count(const std::vector<int>& s) {
        int64_t n = 1;
        for (int d : s) {
            if (d < 0) fail("Tensor: negative dimension");
            n *= d;
        }
        return n;
    }
};

}  // namespace ringrec
