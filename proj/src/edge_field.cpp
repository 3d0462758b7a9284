#include "ideq/edge_field.hpp"

#include <cmath>
#include <stdexcept>

namespace ideq {

EdgeStateField::EdgeStateField(int n, Kind kind, double fill)
    : n_(n), kind_(kind), values_(static_cast<std::size_t>(n) * n, fill) {
    for (int i = 0; i < n; ++i) values_[static_cast<std::size_t>(i) * n + i] = 0.0;
}

std::size_t EdgeStateField::pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    // pairs (0,1), (0,2), ..., (0,n-1), (1,2), ...
    const std::size_t row_start =
        static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i + 1) / 2;
    return row_start + (j - i - 1);
}

std::pair<int, int> EdgeStateField::pair_at(std::size_t index) const {
    int i = 0;
    std::size_t row_len = static_cast<std::size_t>(n_) - 1;
    while (index >= row_len) {
        index -= row_len;
        ++i;
        --row_len;
    }
    return {i, i + 1 + static_cast<int>(index)};
}

int EdgeStateField::row_degree(int i) const {
    int degree = 0;
    for (int j = 0; j < n_; ++j)
        if (j != i && at(i, j) > 0.5) ++degree;
    return degree;
}

bool EdgeStateField::values_in_unit_range(double tol) const {
    for (double v : values_)
        if (!(v >= -tol && v <= 1.0 + tol) || std::isnan(v)) return false;
    return true;
}

bool EdgeStateField::values_binary() const {
    for (double v : values_)
        if (v != 0.0 && v != 1.0) return false;
    return true;
}

}  // namespace ideq
