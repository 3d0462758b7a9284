#include "ideq/instance.hpp"

#include <algorithm>
#include <cmath>

#include "ideq/errors.hpp"
#include "ideq/rng.hpp"

namespace ideq {

Instance::Instance(std::string id, std::vector<Point> coords)
    : id_(std::move(id)), coords_(std::move(coords)) {
    const int n = static_cast<int>(coords_.size());
    if (n < 3) throw SizeError("instance needs at least 3 cities, got " + std::to_string(n));
    dist_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = std::hypot(coords_[i].x - coords_[j].x, coords_[i].y - coords_[j].y);
            dist_[static_cast<std::size_t>(i) * n + j] = d;
            dist_[static_cast<std::size_t>(j) * n + i] = d;
            max_dist_ = std::max(max_dist_, d);
        }
    }
}

bool Tour::is_valid() const {
    const int size = n();
    std::vector<char> seen(size, 0);
    for (int city : order) {
        if (city < 0 || city >= size || seen[city]) return false;
        seen[city] = 1;
    }
    return size >= 3;
}

Tour Tour::canonical() const {
    const int size = n();
    std::vector<int> pos(size);
    for (int k = 0; k < size; ++k) pos[order[k]] = k;

    const int start = pos[0];
    const int next = order[(start + 1) % size];
    const int prev = order[(start + size - 1) % size];

    Tour result;
    result.order.reserve(size);
    const int step = (next <= prev) ? 1 : -1;
    for (int k = 0; k < size; ++k)
        result.order.push_back(order[((start + step * k) % size + size) % size]);
    return result;
}

bool Tour::same_cycle(const Tour& other) const {
    if (n() != other.n()) return false;
    return canonical().order == other.canonical().order;
}

Instance generate_random_instance(int n, std::uint64_t seed) {
    if (n < 3) throw SizeError("instance needs at least 3 cities, got " + std::to_string(n));
    CounterRng rng(seed);
    std::vector<Point> coords(n);
    for (int i = 0; i < n; ++i) {
        coords[i].x = rng.next_unit();
        coords[i].y = rng.next_unit();
    }
    return Instance("rand-n" + std::to_string(n) + "-s" + std::to_string(seed),
                    std::move(coords));
}

double tour_length(const Instance& instance, const Tour& tour) {
    const int n = tour.n();
    if (n != instance.n())
        throw DimensionError("tour has " + std::to_string(n) + " cities, instance has " +
                             std::to_string(instance.n()));
    double total = 0.0;
    for (int k = 0; k < n; ++k) total += instance.dist(tour.order[k], tour.order[(k + 1) % n]);
    return total;
}

GapReport optimality_gap(double found_length, double reference_length) {
    if (!(reference_length > 0.0))
        throw DomainError("reference length must be positive, got " +
                          std::to_string(reference_length));
    return {found_length, reference_length, (found_length - reference_length) / reference_length};
}

EdgeStateField tour_to_adjacency(const Tour& tour) {
    const int n = tour.n();
    EdgeStateField field(n, EdgeStateField::Kind::binary);
    for (int k = 0; k < n; ++k) field.set(tour.order[k], tour.order[(k + 1) % n], 1.0);
    return field;
}

Tour adjacency_to_tour(const EdgeStateField& adjacency) {
    const int n = adjacency.n();
    Tour tour;
    tour.order.reserve(n);
    int prev = -1;
    int current = 0;
    for (int k = 0; k < n; ++k) {
        tour.order.push_back(current);
        int next = -1;
        for (int j = 0; j < n; ++j) {
            if (j != current && j != prev && adjacency.at(current, j) > 0.5) {
                next = j;
                break;
            }
        }
        if (next == -1 && k + 1 < n)
            throw DomainError("field is not a single degree-2 cycle");
        prev = current;
        current = next;
    }
    return tour;
}

}  // namespace ideq
