#pragma once

#include "ideq/instance.hpp"

namespace ideq {

struct ExactResult {
    enum class Method { brute_force, held_karp };

    Tour tour;
    double length = 0.0;
    Method method = Method::brute_force;
};

/// Global minimum by enumerating all (n-1)!/2 distinct cycles, with
/// partial-length pruning. Ties resolve to the lexicographically smallest
/// canonical order. Requires n <= 11.
ExactResult brute_force(const Instance& instance);

/// Optimal tour via subset dynamic programming over paths that start at
/// city 0; the tour is rebuilt from parent pointers. Requires n <= 18.
ExactResult held_karp(const Instance& instance);

constexpr int kBruteForceMaxN = 11;
constexpr int kHeldKarpMaxN = 18;

}  // namespace ideq
