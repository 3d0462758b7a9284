#include "ideq/local_search.hpp"

#include <algorithm>

#include "ideq/errors.hpp"

namespace ideq {

bool is_valid_move(const TwoChangeMove& move, int n) {
    if (move.i < 0 || move.j >= n) return false;
    if (move.j < move.i + 2) return false;
    if (move.i == 0 && move.j == n - 1) return false;
    return true;
}

std::size_t valid_move_count(int n) {
    if (n < 4) return 0;
    // i=0 pairs with j in [2, n-2]; i>=1 pairs with j in [i+2, n-1].
    return static_cast<std::size_t>(n) * (n - 3) / 2;
}

TwoChangeMove move_at(int n, std::size_t k) {
    for (int i = 0; i < n - 2; ++i) {
        const int j_hi = (i == 0) ? n - 2 : n - 1;
        const std::size_t row = static_cast<std::size_t>(j_hi - (i + 2) + 1);
        if (k < row) return {i, i + 2 + static_cast<int>(k)};
        k -= row;
    }
    throw MoveError("move index out of range");
}

Tour apply_two_change(const Tour& tour, const TwoChangeMove& move) {
    if (!is_valid_move(move, tour.n()))
        throw MoveError("invalid 2-change (" + std::to_string(move.i) + ", " +
                        std::to_string(move.j) + ") for n=" + std::to_string(tour.n()));
    Tour result = tour;
    std::reverse(result.order.begin() + move.i + 1, result.order.begin() + move.j + 1);
    return result;
}

double two_change_delta(const Instance& instance, const Tour& tour, const TwoChangeMove& move) {
    const int n = tour.n();
    const int a = tour.order[move.i];
    const int b = tour.order[move.i + 1];
    const int c = tour.order[move.j];
    const int d = tour.order[(move.j + 1) % n];
    return instance.dist(a, c) + instance.dist(b, d) - instance.dist(a, b) - instance.dist(c, d);
}

namespace {

/// Scans all valid moves; returns the most-decreasing one (ties to smallest
/// (i, j)) or delta >= -threshold if none improves.
std::pair<TwoChangeMove, double> best_move(const Instance& instance, const Tour& tour) {
    const int n = tour.n();
    TwoChangeMove best{0, 0};
    double best_delta = 0.0;
    for (int i = 0; i < n - 2; ++i) {
        const int j_hi = (i == 0) ? n - 2 : n - 1;
        for (int j = i + 2; j <= j_hi; ++j) {
            const double delta = two_change_delta(instance, tour, {i, j});
            if (delta < best_delta) {
                best_delta = delta;
                best = {i, j};
            }
        }
    }
    return {best, best_delta};
}

}  // namespace

Tour two_opt(const Instance& instance, const Tour& tour, int* iterations) {
    Tour current = tour;
    int applied = 0;
    for (;;) {
        const auto [move, delta] = best_move(instance, current);
        if (delta >= -kImprovementThreshold) break;
        std::reverse(current.order.begin() + move.i + 1, current.order.begin() + move.j + 1);
        ++applied;
    }
    if (iterations) *iterations = applied;
    return current;
}

bool is_two_opt_fixed_point(const Instance& instance, const Tour& tour) {
    return best_move(instance, tour).second >= -kImprovementThreshold;
}

Tour sample_equivalence_target(const Tour& optimal, CounterRng& rng) {
    const int n = optimal.n();
    if (n < 5)
        throw SizeError("equivalence-class sampling needs n >= 5, got " + std::to_string(n));
    const std::size_t moves = valid_move_count(n);
    Tour result = apply_two_change(optimal, move_at(n, rng.next_below(moves)));
    result = apply_two_change(result, move_at(n, rng.next_below(moves)));
    return result;
}

}  // namespace ideq
