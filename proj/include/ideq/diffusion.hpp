#pragma once

#include <vector>

#include "ideq/edge_field.hpp"
#include "ideq/rng.hpp"

namespace ideq {

/// Two-state categorical noise schedule with the flip-to-uniform kernel.
///
/// The per-step transition matrix is Q_t = (1-beta_t) I + beta_t U, where U
/// is uniform over the two states, and the cumulative kernel has the closed
/// form Qbar_t = alpha_bar_t I + (1-alpha_bar_t) U with
/// alpha_bar_t = prod_{s<=t} (1-beta_s). Cat(p=1/2) is stationary, so the
/// chain forgets its start as alpha_bar decays.
class DiffusionSchedule {
public:
    enum class BetaCurve { linear, cosine };

    DiffusionSchedule() = default;
    DiffusionSchedule(int T, std::vector<double> betas, int n_inference);

    int T() const { return static_cast<int>(betas_.size()); }
    double beta(int t) const { return betas_[t - 1]; }

    /// alpha_bar(0) == 1 by convention (no noise applied yet).
    double alpha_bar(int t) const { return t == 0 ? 1.0 : alpha_bar_[t - 1]; }

    /// Probability that an edge keeps its clean state after t steps.
    double keep_probability(int t) const { return alpha_bar(t) + (1.0 - alpha_bar(t)) / 2.0; }

    /// Strictly decreasing timesteps in {T..1}; Algorithm 1's schedule.
    const std::vector<int>& inference_steps() const { return inference_steps_; }

    bool in_range(int t) const { return t >= 1 && t <= T(); }
    void require_in_range(int t) const;

private:
    std::vector<double> betas_;
    std::vector<double> alpha_bar_;
    std::vector<int> inference_steps_;
};

/// Builds a schedule of T steps with betas interpolated over
/// [beta_min, beta_max] (linear by default) and n_inference timesteps spread
/// evenly over {T..1}.
DiffusionSchedule make_schedule(int T, double beta_min, double beta_max, int n_inference,
                                DiffusionSchedule::BetaCurve curve = DiffusionSchedule::BetaCurve::linear);

/// One q(x_t | x_0) draw: every unordered pair independently keeps its state
/// with probability keep_probability(t), else flips. One random draw per
/// pair, mirrored, so symmetry is structural.
EdgeStateField forward_sample(const EdgeStateField& x0, int t, const DiffusionSchedule& schedule,
                              CounterRng& rng);

/// Per-edge posterior q(x_{t-1} | x_t, x0_hat) for the two-state kernel,
/// stored as P(state = 1). Requires t >= 2.
EdgeStateField posterior_probs(const EdgeStateField& x_t, const EdgeStateField& x0_hat, int t,
                               const DiffusionSchedule& schedule);

/// Posterior across a span of steps: q(x_{t_lo} | x_{t_hi}, x0_hat) with the
/// composed kernel from t_lo to t_hi. Reduces to posterior_probs when
/// t_lo == t_hi - 1; used by strided inference schedules.
EdgeStateField posterior_probs_span(const EdgeStateField& x_t, const EdgeStateField& x0_hat,
                                    int t_hi, int t_lo, const DiffusionSchedule& schedule);

/// Independent Bernoulli draw per unordered pair, mirrored.
EdgeStateField posterior_sample(const EdgeStateField& posterior, CounterRng& rng);

/// Stationary start x_T: each unordered pair is 1 with probability 1/2.
EdgeStateField init_noise(int n, CounterRng& rng);

}  // namespace ideq
