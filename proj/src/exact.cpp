#include "ideq/exact.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ideq/errors.hpp"

namespace ideq {
namespace {

struct BruteForceSearch {
    const Instance& instance;
    int n;
    std::vector<int> current;
    std::vector<char> used;
    double best_length = std::numeric_limits<double>::infinity();
    Tour best_tour;

    explicit BruteForceSearch(const Instance& inst)
        : instance(inst), n(inst.n()), current(inst.n()), used(inst.n(), 0) {}

    void consider(double length) {
        Tour candidate{current};
        if (length < best_length) {
            best_length = length;
            best_tour = candidate.canonical();
        } else if (length == best_length) {
            Tour canon = candidate.canonical();
            if (canon.order < best_tour.order) best_tour = std::move(canon);
        }
    }

    void extend(int depth, double partial) {
        // Strict comparison so equal-length tours still reach the tie-break.
        if (partial > best_length) return;
        if (depth == n) {
            consider(partial + instance.dist(current[n - 1], 0));
            return;
        }
        for (int city = 1; city < n; ++city) {
            if (used[city]) continue;
            // Reflection symmetry: force second city < last city.
            if (depth == n - 1 && city < current[1]) continue;
            used[city] = 1;
            current[depth] = city;
            extend(depth + 1, partial + instance.dist(current[depth - 1], city));
            used[city] = 0;
        }
    }
};

}  // namespace

ExactResult brute_force(const Instance& instance) {
    const int n = instance.n();
    if (n > kBruteForceMaxN)
        throw SizeError("brute_force limited to n <= " + std::to_string(kBruteForceMaxN) +
                        ", got " + std::to_string(n));

    BruteForceSearch search(instance);
    search.current[0] = 0;
    search.used[0] = 1;
    search.extend(1, 0.0);
    return {std::move(search.best_tour), search.best_length, ExactResult::Method::brute_force};
}

ExactResult held_karp(const Instance& instance) {
    const int n = instance.n();
    if (n > kHeldKarpMaxN)
        throw SizeError("held_karp limited to n <= " + std::to_string(kHeldKarpMaxN) + ", got " +
                        std::to_string(n));

    // dp[mask][j]: shortest path 0 -> j visiting exactly {0}|mask, j in mask.
    // mask indexes subsets of cities 1..n-1 via bit j-1.
    const int m = n - 1;
    const std::size_t num_masks = std::size_t{1} << m;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(num_masks * m, inf);
    std::vector<int> parent(num_masks * m, -1);

    for (int j = 1; j < n; ++j) dp[(std::size_t{1} << (j - 1)) * m + (j - 1)] = instance.dist(0, j);

    for (std::size_t mask = 1; mask < num_masks; ++mask) {
        for (int j = 1; j < n; ++j) {
            const std::size_t bit = std::size_t{1} << (j - 1);
            if (!(mask & bit)) continue;
            const double base = dp[mask * m + (j - 1)];
            if (base == inf) continue;
            for (int k = 1; k < n; ++k) {
                const std::size_t kbit = std::size_t{1} << (k - 1);
                if (mask & kbit) continue;
                const std::size_t next = mask | kbit;
                const double candidate = base + instance.dist(j, k);
                if (candidate < dp[next * m + (k - 1)]) {
                    dp[next * m + (k - 1)] = candidate;
                    parent[next * m + (k - 1)] = j;
                }
            }
        }
    }

    const std::size_t full = num_masks - 1;
    double best = inf;
    int last = -1;
    for (int j = 1; j < n; ++j) {
        const double candidate = dp[full * m + (j - 1)] + instance.dist(j, 0);
        if (candidate < best) {
            best = candidate;
            last = j;
        }
    }

    Tour tour;
    tour.order.assign(n, 0);
    std::size_t mask = full;
    int city = last;
    for (int pos = n - 1; pos >= 1; --pos) {
        tour.order[pos] = city;
        const int prev = parent[mask * m + (city - 1)];
        mask &= ~(std::size_t{1} << (city - 1));
        city = prev;
    }
    return {tour.canonical(), best, ExactResult::Method::held_karp};
}

}  // namespace ideq
