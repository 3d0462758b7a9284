#include "ideq/diffusion.hpp"

#include <cmath>
#include <string>

#include "ideq/errors.hpp"

namespace ideq {

DiffusionSchedule::DiffusionSchedule(int T, std::vector<double> betas, int n_inference)
    : betas_(std::move(betas)) {
    if (T < 1 || static_cast<int>(betas_.size()) != T)
        throw ConfigError("schedule needs T >= 1 betas");
    if (n_inference < 1 || n_inference > T)
        throw ConfigError("n_inference must be in [1, T]");
    alpha_bar_.resize(betas_.size());
    double product = 1.0;
    for (std::size_t s = 0; s < betas_.size(); ++s) {
        if (!(betas_[s] > 0.0 && betas_[s] < 1.0))
            throw ConfigError("betas must lie strictly inside (0, 1)");
        product *= 1.0 - betas_[s];
        alpha_bar_[s] = product;
    }

    // n_inference timesteps evenly spaced over {T..1}, strictly decreasing.
    inference_steps_.reserve(n_inference);
    if (n_inference == 1) {
        inference_steps_.push_back(T);
    } else {
        for (int k = 0; k < n_inference; ++k) {
            const double pos = T - static_cast<double>(k) * (T - 1) / (n_inference - 1);
            const int t = static_cast<int>(std::lround(pos));
            if (inference_steps_.empty() || t < inference_steps_.back())
                inference_steps_.push_back(t);
        }
    }
}

void DiffusionSchedule::require_in_range(int t) const {
    if (!in_range(t))
        throw TimestepError("timestep " + std::to_string(t) + " outside [1, " +
                            std::to_string(T()) + "]");
}

DiffusionSchedule make_schedule(int T, double beta_min, double beta_max, int n_inference,
                                DiffusionSchedule::BetaCurve curve) {
    if (T < 1) throw ConfigError("T must be >= 1");
    if (!(beta_min > 0.0) || !(beta_min <= beta_max) || !(beta_max < 1.0))
        throw ConfigError("need 0 < beta_min <= beta_max < 1");
    if (n_inference < 1 || n_inference > T) throw ConfigError("n_inference must be in [1, T]");

    std::vector<double> betas(T);
    for (int t = 1; t <= T; ++t) {
        const double u = T == 1 ? 1.0 : static_cast<double>(t - 1) / (T - 1);
        if (curve == DiffusionSchedule::BetaCurve::linear) {
            betas[t - 1] = beta_min + (beta_max - beta_min) * u;
        } else {
            // Half-cosine ramp between the same endpoints.
            betas[t - 1] = beta_min + (beta_max - beta_min) * 0.5 * (1.0 - std::cos(M_PI * u));
        }
    }
    return DiffusionSchedule(T, std::move(betas), n_inference);
}

EdgeStateField forward_sample(const EdgeStateField& x0, int t, const DiffusionSchedule& schedule,
                              CounterRng& rng) {
    schedule.require_in_range(t);
    const double keep = schedule.keep_probability(t);
    const int n = x0.n();
    EdgeStateField x_t(n, EdgeStateField::Kind::binary);
    const std::uint64_t base = rng.counter();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double u = rng.unit_at(base + x_t.pair_index(i, j));
            const double state = x0.at(i, j);
            x_t.set(i, j, u < keep ? state : 1.0 - state);
        }
    }
    rng.skip(x_t.pair_count());
    return x_t;
}

namespace {

/// Entries of Q = a I + (1-a) U for the two-state uniform kernel.
inline double kernel_entry(double a, int from, int to) {
    return (from == to ? a : 0.0) + (1.0 - a) / 2.0;
}

EdgeStateField posterior_with(const EdgeStateField& x_t, const EdgeStateField& x0_hat,
                              double a_step, double a_bar_lo, double a_bar_hi) {
    if (x_t.n() != x0_hat.n()) throw DimensionError("field sizes differ");
    const int n = x_t.n();
    EdgeStateField out(n, EdgeStateField::Kind::soft);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int s_t = x_t.at(i, j) > 0.5 ? 1 : 0;
            const int s_0 = x0_hat.at(i, j) > 0.5 ? 1 : 0;
            // q(x_lo = s | x_hi, x0) ~ Q_step[s, s_t] * Qbar_lo[s_0, s]
            const double num0 = kernel_entry(a_step, 0, s_t) * kernel_entry(a_bar_lo, s_0, 0);
            const double num1 = kernel_entry(a_step, 1, s_t) * kernel_entry(a_bar_lo, s_0, 1);
            out.set(i, j, num1 / (num0 + num1));
        }
    }
    (void)a_bar_hi;  // the normalizer Qbar_hi[s_0, s_t] equals num0 + num1
    return out;
}

}  // namespace

EdgeStateField posterior_probs(const EdgeStateField& x_t, const EdgeStateField& x0_hat, int t,
                               const DiffusionSchedule& schedule) {
    schedule.require_in_range(t);
    if (t < 2) throw TimestepError("posterior needs t >= 2");
    return posterior_with(x_t, x0_hat, 1.0 - schedule.beta(t), schedule.alpha_bar(t - 1),
                          schedule.alpha_bar(t));
}

EdgeStateField posterior_probs_span(const EdgeStateField& x_t, const EdgeStateField& x0_hat,
                                    int t_hi, int t_lo, const DiffusionSchedule& schedule) {
    schedule.require_in_range(t_hi);
    if (t_lo < 1 || t_lo >= t_hi)
        throw TimestepError("need 1 <= t_lo < t_hi");
    const double a_span = schedule.alpha_bar(t_hi) / schedule.alpha_bar(t_lo);
    return posterior_with(x_t, x0_hat, a_span, schedule.alpha_bar(t_lo), schedule.alpha_bar(t_hi));
}

EdgeStateField posterior_sample(const EdgeStateField& posterior, CounterRng& rng) {
    const int n = posterior.n();
    EdgeStateField x(n, EdgeStateField::Kind::binary);
    const std::uint64_t base = rng.counter();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            x.set(i, j, rng.unit_at(base + x.pair_index(i, j)) < posterior.at(i, j) ? 1.0 : 0.0);
    rng.skip(x.pair_count());
    return x;
}

EdgeStateField init_noise(int n, CounterRng& rng) {
    if (n < 3) throw SizeError("need n >= 3");
    EdgeStateField x(n, EdgeStateField::Kind::binary);
    const std::uint64_t base = rng.counter();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            x.set(i, j, rng.unit_at(base + x.pair_index(i, j)) < 0.5 ? 1.0 : 0.0);
    rng.skip(x.pair_count());
    return x;
}

}  // namespace ideq
