#include "ringrec/grid.hpp"

#include <algorithm>
#include <cmath>

namespace ringrec {

void Grid2D::require_finite(const std::string& what) const {
    for (size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            fail(what + ": non-finite value at flat index " + std::to_string(i));
        }
    }
}

double Grid2D::min() const {
    if (data_.empty()) return 0.0;
    return *std::min_element(data_.begin(), data_.end());
}

double Grid2D::max() const {
    if (data_.empty()) return 0.0;
    return *std::max_element(data_.begin(), data_.end());
}

double Grid2D::sum() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
}

}  // namespace ringrec
