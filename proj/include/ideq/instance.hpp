#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ideq/edge_field.hpp"

namespace ideq {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// One Euclidean TSP problem: city coordinates plus the derived dense
/// distance matrix. Immutable after construction.
class Instance {
public:
    Instance() = default;

    /// Builds the distance matrix from coordinates. Requires n >= 3.
    Instance(std::string id, std::vector<Point> coords);

    const std::string& id() const { return id_; }
    int n() const { return static_cast<int>(coords_.size()); }
    const std::vector<Point>& coords() const { return coords_; }

    double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n() + j]; }
    double max_dist() const { return max_dist_; }

private:
    std::string id_;
    std::vector<Point> coords_;
    std::vector<double> dist_;
    double max_dist_ = 0.0;
};

/// Hamiltonian cycle as a visit sequence over {0..n-1}; the edge from the
/// last city back to the first is implicit.
struct Tour {
    std::vector<int> order;

    int n() const { return static_cast<int>(order.size()); }
    bool is_valid() const;  // order is a permutation of {0..n-1}

    /// Rotation/reversal-invariant form: starts at city 0, second element is
    /// the smaller of city 0's two neighbours. Used for equality up to
    /// symmetry and for deterministic tie-breaking.
    Tour canonical() const;

    /// Equality as edge sets (invariant under rotation and reversal).
    bool same_cycle(const Tour& other) const;
};

struct GapReport {
    double found_length = 0.0;
    double reference_length = 0.0;
    double gap = 0.0;  // fraction; negative when found < reference
};

/// n i.i.d. uniform points in [0,1]^2; deterministic for a fixed (n, seed).
Instance generate_random_instance(int n, std::uint64_t seed);

/// Sum of consecutive distances including the closing edge.
double tour_length(const Instance& instance, const Tour& tour);

/// gap = (found - reference) / reference. Requires reference > 0.
GapReport optimality_gap(double found_length, double reference_length);

/// Binary symmetric field with exactly the cycle's edges set to 1.
EdgeStateField tour_to_adjacency(const Tour& tour);

/// Walks the cycle of a degree-2 binary field back into a Tour.
Tour adjacency_to_tour(const EdgeStateField& adjacency);

}  // namespace ideq
