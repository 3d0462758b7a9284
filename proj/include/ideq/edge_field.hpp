#pragma once

#include <cstddef>
#include <vector>

namespace ideq {

/// Symmetric per-edge field over the complete graph on n cities.
///
/// Stores one real value per unordered city pair, mirrored across the
/// diagonal; the diagonal itself is fixed to 0. A `binary` field holds only
/// {0, 1} (adjacency matrices, diffusion states x_t); a `soft` field holds
/// probabilities in [0, 1] (heatmaps, posteriors).
class EdgeStateField {
public:
    enum class Kind { binary, soft };

    EdgeStateField() = default;
    EdgeStateField(int n, Kind kind, double fill = 0.0);

    int n() const { return n_; }
    Kind kind() const { return kind_; }
    bool is_binary() const { return kind_ == Kind::binary; }

    double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * n_ + j]; }

    /// Sets both (i,j) and (j,i); i == j is ignored so the diagonal stays 0.
    void set(int i, int j, double v) {
        if (i == j) return;
        values_[static_cast<std::size_t>(i) * n_ + j] = v;
        values_[static_cast<std::size_t>(j) * n_ + i] = v;
    }

    /// Number of unordered pairs, n*(n-1)/2.
    std::size_t pair_count() const { return static_cast<std::size_t>(n_) * (n_ - 1) / 2; }

    /// Row-major rank of the unordered pair (i, j), i < j.
    std::size_t pair_index(int i, int j) const;

    /// Inverse of pair_index.
    std::pair<int, int> pair_at(std::size_t index) const;

    int row_degree(int i) const;  // count of entries > 0.5 in row i

    bool values_in_unit_range(double tol = 0.0) const;
    bool values_binary() const;

    bool operator==(const EdgeStateField& other) const = default;

private:
    int n_ = 0;
    Kind kind_ = Kind::soft;
    std::vector<double> values_;
};

}  // namespace ideq
