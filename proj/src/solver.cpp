#include "ideq/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "ideq/errors.hpp"
#include "ideq/local_search.hpp"

namespace ideq {
namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Candidate {
    double score;
    double dist;
    int i, j;
};

}  // namespace

Tour reconstruct_hamiltonian(const Instance& instance, const EdgeStateField& heatmap) {
    const int n = instance.n();
    if (heatmap.n() != n) throw DimensionError("heatmap size does not match instance");

    std::vector<Candidate> candidates;
    candidates.reserve(heatmap.pair_count());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            candidates.push_back({heatmap.at(i, j), instance.dist(i, j), i, j});
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    std::vector<int> degree(n, 0);
    EdgeStateField adjacency(n, EdgeStateField::Kind::binary);
    UnionFind components(n);
    int added = 0;

    auto try_insert = [&](const Candidate& c) {
        if (degree[c.i] == 2 || degree[c.j] == 2) return;
        // A cycle may only close once all n edges line up (the full tour).
        if (components.find(c.i) == components.find(c.j) && added != n - 1) return;
        adjacency.set(c.i, c.j, 1.0);
        ++degree[c.i];
        ++degree[c.j];
        components.unite(c.i, c.j);
        ++added;
    };

    for (const Candidate& c : candidates) {
        try_insert(c);
        if (added == n) break;
    }
    // Leftover path endpoints: same ordering, now feasible closures only.
    // Degrees only fill and components only merge, so one more sweep visits
    // every remaining feasible pair in score order.
    if (added < n)
        for (const Candidate& c : candidates) {
            try_insert(c);
            if (added == n) break;
        }

    return adjacency_to_tour(adjacency);
}

EdgeStateField project_x0(const Instance& instance, const EdgeStateField& soft_x0,
                          ProjectionMode mode) {
    if (mode == ProjectionMode::none) {
        EdgeStateField out(soft_x0.n(), EdgeStateField::Kind::binary);
        for (int i = 0; i < soft_x0.n(); ++i)
            for (int j = i + 1; j < soft_x0.n(); ++j)
                out.set(i, j, soft_x0.at(i, j) > 0.5 ? 1.0 : 0.0);
        return out;
    }
    Tour tour = reconstruct_hamiltonian(instance, soft_x0);
    if (mode == ProjectionMode::ideq) tour = two_opt(instance, tour);
    return tour_to_adjacency(tour);
}

namespace {

/// One backward pass from x at `steps.front()` down the given step list,
/// with the configured projection at every step. Returns the decoded tour
/// at the last step.
Tour backward_pass(const Instance& instance, const Denoiser& denoiser, const SolveConfig& config,
                   const std::vector<int>& steps, EdgeStateField x, CounterRng& rng) {
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const int t = steps[k];
        const EdgeStateField soft = denoiser(instance, x, t);
        if (k + 1 == steps.size()) {
            Tour tour = reconstruct_hamiltonian(instance, soft);
            if (config.projection_mode == ProjectionMode::ideq || config.final_two_opt)
                tour = two_opt(instance, tour);
            return tour;
        }
        const EdgeStateField x0_hat = project_x0(instance, soft, config.projection_mode);
        const EdgeStateField posterior =
            posterior_probs_span(x, x0_hat, t, steps[k + 1], config.schedule);
        x = posterior_sample(posterior, rng);
    }
    throw ConfigError("empty inference schedule");
}

SolveResult solve_single(const Instance& instance, const Denoiser& denoiser,
                         const SolveConfig& config, std::uint64_t seed) {
    const DiffusionSchedule& schedule = config.schedule;
    CounterRng root(seed);
    CounterRng noise_rng = root.derive(1);
    CounterRng backward_rng = root.derive(2);
    CounterRng refine_rng = root.derive(3);

    SolveResult result;
    result.seed = seed;

    EdgeStateField x = init_noise(instance.n(), noise_rng);
    Tour best = backward_pass(instance, denoiser, config, schedule.inference_steps(), x, backward_rng);
    double best_length = tour_length(instance, best);
    result.round_lengths.push_back(best_length);

    // Unguided partial re-noise/denoise rounds; keep the shorter tour.
    const int t_renoise = std::clamp(
        static_cast<int>(std::lround(config.renoise_fraction * schedule.T())), 1, schedule.T());
    std::vector<int> truncated;
    truncated.push_back(t_renoise);
    for (int t : schedule.inference_steps())
        if (t < t_renoise) truncated.push_back(t);

    for (int round = 0; round < config.refinement_rounds; ++round) {
        const EdgeStateField renoised =
            forward_sample(tour_to_adjacency(best), t_renoise, schedule, refine_rng);
        const Tour candidate =
            backward_pass(instance, denoiser, config, truncated, renoised, refine_rng);
        const double candidate_length = tour_length(instance, candidate);
        if (candidate_length < best_length) {
            best = candidate;
            best_length = candidate_length;
        }
        result.round_lengths.push_back(best_length);
    }

    result.tour = std::move(best);
    result.length = best_length;
    return result;
}

}  // namespace

SolveResult solve(const Instance& instance, const Denoiser& denoiser, const SolveConfig& config) {
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();

    if (instance.n() < 5) throw SizeError("solve needs n >= 5, got " + std::to_string(instance.n()));
    if (config.schedule.T() < 1) throw ConfigError("solve config has no schedule");
    if (denoiser.t_max() != config.schedule.T())
        throw ConfigError("checkpoint expects T=" + std::to_string(denoiser.t_max()) +
                          ", schedule has T=" + std::to_string(config.schedule.T()));
    if (config.samples < 1) throw ConfigError("samples must be >= 1");
    if (config.refinement_rounds < 0) throw ConfigError("refinement_rounds must be >= 0");
    if (!(config.renoise_fraction > 0.0 && config.renoise_fraction < 1.0))
        throw ConfigError("renoise_fraction must lie strictly inside (0, 1)");

    SolveResult best;
    double best_length = std::numeric_limits<double>::infinity();
    for (int replica = 0; replica < config.samples; ++replica) {
        SolveResult candidate =
            solve_single(instance, denoiser, config, config.seed + static_cast<std::uint64_t>(replica));
        if (candidate.length < best_length) {
            best_length = candidate.length;
            best = std::move(candidate);
        }
    }
    best.wall_seconds = std::chrono::duration<double>(clock::now() - started).count();
    return best;
}

SolveResult solve(const Instance& instance, const Checkpoint& checkpoint,
                  const SolveConfig& config) {
    return solve(instance, NetworkDenoiser(checkpoint.params), config);
}

}  // namespace ideq
