#pragma once

#include <cstdint>
#include <vector>

#include "ideq/denoiser.hpp"
#include "ideq/diffusion.hpp"
#include "ideq/instance.hpp"

namespace ideq {

/// How the predicted clean state is projected inside the backward process.
enum class ProjectionMode {
    ideq,         // two-opt(reconstruct(heatmap)): the full projection
    decode_only,  // reconstruct(heatmap) alone
    none,         // elementwise threshold at 0.5; no Hamiltonian guarantee
};

struct SolveConfig {
    DiffusionSchedule schedule;
    int refinement_rounds = 3;
    double renoise_fraction = 0.15;  // alpha: refinement re-noises to round(alpha*T)
    int samples = 1;
    ProjectionMode projection_mode = ProjectionMode::ideq;
    /// One 2-opt pass on the final tour; only meaningful for decode_only and
    /// none, whose in-loop projection skips it (the usual post-processing of
    /// greedy-decoded heatmaps). ideq tours are already fixed points.
    bool final_two_opt = true;
    std::uint64_t seed = 0;
};

struct SolveResult {
    Tour tour;
    double length = 0.0;
    std::vector<double> round_lengths;  // best-so-far after decode + each refinement round
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

/// Greedy edge insertion: unordered pairs sorted by heatmap score (ties by
/// shorter distance, then smaller index pair); an edge enters if both
/// endpoints still have degree < 2 and it closes no cycle shorter than n;
/// leftover path endpoints are then connected by the same ordering. Total:
/// always returns a valid tour.
Tour reconstruct_hamiltonian(const Instance& instance, const EdgeStateField& heatmap);

/// Binary projection of a soft clean-state estimate, per mode.
EdgeStateField project_x0(const Instance& instance, const EdgeStateField& soft_x0,
                          ProjectionMode mode);

/// The full inference pipeline: stationary init, projected backward process
/// over the inference schedule, unguided partial re-noise/denoise refinement
/// rounds keeping the best tour, optionally repeated over independent
/// sample replicas (seed + replica index) taking the overall best.
SolveResult solve(const Instance& instance, const Denoiser& denoiser, const SolveConfig& config);

/// Convenience overload running the trained network from a checkpoint.
SolveResult solve(const Instance& instance, const Checkpoint& checkpoint,
                  const SolveConfig& config);

}  // namespace ideq
