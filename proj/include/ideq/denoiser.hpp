#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ideq/diffusion.hpp"
#include "ideq/edge_field.hpp"
#include "ideq/instance.hpp"
#include "ideq/rng.hpp"

namespace ideq {

/// Weights of the edge-scoring network.
///
/// The network embeds per-edge features (normalized distance, symmetrized
/// nearest-neighbour ranks, the edge's state in x_t, a sinusoidal timestep
/// embedding), runs two rounds of mean message passing between edges and
/// their endpoint cities, and squashes a scalar logit per edge through a
/// logistic. All-zero weights give exactly 0.5 everywhere.
struct DenoiserParams {
    int hidden = 16;
    int t_max = 50;  // timestep normalization used by the embedding
    std::vector<double> values;

    static constexpr int kFeatureDim = 12;

    static DenoiserParams zeros(int hidden, int t_max);

    /// Uniform(-r, r) init with r = 1/sqrt(fan_in) per layer; deterministic.
    static DenoiserParams random_init(int hidden, int t_max, CounterRng& rng);

    std::size_t size() const { return values.size(); }
    bool all_finite() const;

    static std::size_t value_count(int hidden);
};

struct TrainingConfig {
    enum class TargetMode { dirac, equivalence_class };
    enum class RedrawPolicy { per_epoch, per_step };

    TargetMode target_mode = TargetMode::dirac;
    double learning_rate = 0.05;
    double momentum = 0.0;
    int epochs = 100;
    int batch_size = 8;
    std::uint64_t seed = 0;
    int n = 20;            // instance size the run expects
    int dataset_size = 0;  // informational; checked against the dataset

    // Schedule used to corrupt training targets.
    int T = 50;
    double beta_min = 0.015;
    double beta_max = 0.25;
    DiffusionSchedule::BetaCurve beta_curve = DiffusionSchedule::BetaCurve::linear;

    int hidden = 16;
    bool reweight_positives = true;  // weight tour edges by (n-2)/2
    RedrawPolicy equivalence_redraw = RedrawPolicy::per_epoch;
};

struct Checkpoint {
    DenoiserParams params;
    TrainingConfig config;
    std::vector<double> loss_curve;  // mean training loss per epoch
    double wall_seconds = 0.0;
};

/// P(edge belongs to x_0) per unordered pair; symmetric, in (0,1).
EdgeStateField denoise(const DenoiserParams& params, const Instance& instance,
                       const EdgeStateField& x_t, int t);

/// Perfect-denoiser test double: the known optimal tour's adjacency softened
/// to {1e-6, 1 - 1e-6}, independent of x_t and t.
EdgeStateField oracle_denoise(const Instance& instance, const EdgeStateField& x_t, int t,
                              const Tour& known_optimal);

struct TrainingSample {
    const Instance* instance = nullptr;
    const EdgeStateField* x_t = nullptr;
    int t = 0;
    const EdgeStateField* target = nullptr;
};

struct LossOptions {
    /// Weight on edges with target 1; <= 0 means the default (n-2)/2.
    double positive_weight = -1.0;
};

/// Mean weighted per-edge binary cross-entropy over the batch, with the
/// gradient in the same layout as `params`. Targets may be soft; training
/// always feeds binary adjacencies.
std::pair<double, DenoiserParams> loss_and_grad(const DenoiserParams& params,
                                                const std::vector<TrainingSample>& batch,
                                                const LossOptions& options = {});

/// Supervised training loop. Per sample: draw t uniform in {1..T}, corrupt
/// the target adjacency with forward_sample, regress the denoiser output
/// toward the target. Dirac mode targets the labelled tour; equivalence-
/// class mode redraws a 2-change neighbour of it (per epoch by default).
/// SGD with optional momentum; fully deterministic under config.seed.
Checkpoint train(const TrainingConfig& config,
                 const std::vector<std::pair<Instance, Tour>>& dataset,
                 const Checkpoint* init = nullptr);

void save_checkpoint(const Checkpoint& checkpoint, std::ostream& out);
void save_checkpoint_file(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint_file(const std::string& path);

/// Pluggable denoiser used by the solver: the trained network in production,
/// the oracle in tests.
class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual EdgeStateField operator()(const Instance& instance, const EdgeStateField& x_t,
                                      int t) const = 0;
    virtual int t_max() const = 0;
};

class NetworkDenoiser final : public Denoiser {
public:
    explicit NetworkDenoiser(DenoiserParams params) : params_(std::move(params)) {}
    EdgeStateField operator()(const Instance& instance, const EdgeStateField& x_t,
                              int t) const override {
        return denoise(params_, instance, x_t, t);
    }
    int t_max() const override { return params_.t_max; }

private:
    DenoiserParams params_;
};

class OracleDenoiser final : public Denoiser {
public:
    OracleDenoiser(Tour optimal, int t_max) : optimal_(std::move(optimal)), t_max_(t_max) {}
    EdgeStateField operator()(const Instance& instance, const EdgeStateField& x_t,
                              int t) const override {
        return oracle_denoise(instance, x_t, t, optimal_);
    }
    int t_max() const override { return t_max_; }

private:
    Tour optimal_;
    int t_max_;
};

}  // namespace ideq
