#pragma once

#include <string>
#include <vector>

#include "ideq/instance.hpp"
#include "ideq/local_search.hpp"
#include "ideq/rng.hpp"

namespace ideq::testing {

inline std::string repo_path(const std::string& relative) {
    return std::string(IDEQ_REPO_DIR) + "/" + relative;
}

inline Tour random_tour(int n, CounterRng& rng) {
    Tour tour;
    tour.order.resize(n);
    for (int i = 0; i < n; ++i) tour.order[i] = i;
    for (int k = n; k > 1; --k)
        std::swap(tour.order[k - 1], tour.order[rng.next_below(static_cast<std::uint64_t>(k))]);
    return tour;
}

inline Tour best_of_k_two_opt(const Instance& instance, int k, CounterRng& rng) {
    Tour best;
    double best_length = 1e300;
    for (int r = 0; r < k; ++r) {
        Tour candidate = two_opt(instance, random_tour(instance.n(), rng));
        const double length = tour_length(instance, candidate);
        if (length < best_length) {
            best_length = length;
            best = std::move(candidate);
        }
    }
    return best;
}

inline bool ccw(const Point& a, const Point& b, const Point& c) {
    return (c.y - a.y) * (b.x - a.x) > (b.y - a.y) * (c.x - a.x);
}

/// Proper interior crossing of segments ab and cd (shared endpoints excluded
/// by the caller passing non-adjacent tour edges).
inline bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
    return ccw(a, c, d) != ccw(b, c, d) && ccw(a, b, c) != ccw(a, b, d);
}

inline bool tour_has_crossing(const Instance& instance, const Tour& tour) {
    const int n = tour.n();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int a = tour.order[i], b = tour.order[(i + 1) % n];
            const int c = tour.order[j], d = tour.order[(j + 1) % n];
            if (a == c || a == d || b == c || b == d) continue;
            if (segments_cross(instance.coords()[a], instance.coords()[b], instance.coords()[c],
                               instance.coords()[d]))
                return true;
        }
    }
    return false;
}

/// The Fig-1-style 8-point configuration used across local-search tests.
inline Instance entangled8() {
    return Instance("entangled8", {{0.1, 0.0},
                                   {0.1, 0.7},
                                   {0.3, 0.1},
                                   {0.3, 0.6},
                                   {0.4, 0.3},
                                   {0.4, 0.4},
                                   {0.6, 0.2},
                                   {0.6, 0.5}});
}

inline Tour entangled8_start() { return Tour{{0, 1, 2, 5, 6, 7, 4, 3}}; }
inline Tour entangled8_optimum() { return Tour{{0, 2, 4, 6, 7, 5, 3, 1}}; }

}  // namespace ideq::testing
