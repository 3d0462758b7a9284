#include "ideq/denoiser.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <ostream>

#include "ideq/errors.hpp"
#include "ideq/local_search.hpp"

namespace ideq {
namespace {

constexpr int kF = DenoiserParams::kFeatureDim;
constexpr int kTimeEmbedDim = 8;

/// Offsets of the layers inside the flat parameter vector.
struct Layout {
    int H;
    std::size_t w0, b0;       // embed: H x F, H
    std::size_t w1, u1, b1;   // round 1: H x H, H x H, H
    std::size_t w2, u2, b2;   // round 2: H x H, H x H, H
    std::size_t w_out, b_out; // readout: H, 1
    std::size_t total;

    explicit Layout(int hidden) : H(hidden) {
        const std::size_t h = static_cast<std::size_t>(hidden);
        w0 = 0;
        b0 = w0 + h * kF;
        w1 = b0 + h;
        u1 = w1 + h * h;
        b1 = u1 + h * h;
        w2 = b1 + h;
        u2 = w2 + h * h;
        b2 = u2 + h * h;
        w_out = b2 + h;
        b_out = w_out + h;
        total = b_out + 1;
    }
};

double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

/// Static per-pair features of one instance: normalized distance and the
/// symmetrized nearest-neighbour ranks of the pair. Rank counting uses
/// strictly-smaller distances so ties keep permutation equivariance.
std::vector<double> static_pair_features(const Instance& instance) {
    const int n = instance.n();
    const double scale = instance.max_dist() > 0.0 ? 1.0 / instance.max_dist() : 1.0;

    std::vector<double> rank(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<std::pair<double, int>> row;
    for (int i = 0; i < n; ++i) {
        row.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) row.emplace_back(instance.dist(i, j), j);
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double current = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k > 0 && row[k].first > row[k - 1].first) current = static_cast<double>(k);
            rank[static_cast<std::size_t>(i) * n + row[k].second] = current;
        }
    }

    const double rank_scale = n > 2 ? 1.0 / static_cast<double>(n - 2) : 1.0;
    EdgeStateField indexer(n, EdgeStateField::Kind::soft);
    std::vector<double> features(indexer.pair_count() * 3);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const std::size_t e = indexer.pair_index(i, j);
            const double ri = rank[static_cast<std::size_t>(i) * n + j];
            const double rj = rank[static_cast<std::size_t>(j) * n + i];
            features[e * 3 + 0] = instance.dist(i, j) * scale;
            features[e * 3 + 1] = std::min(ri, rj) * rank_scale;
            features[e * 3 + 2] = std::max(ri, rj) * rank_scale;
        }
    }
    return features;
}

void time_embedding(int t, int t_max, double* out) {
    const double tau = static_cast<double>(t) / static_cast<double>(t_max);
    for (int k = 0; k < kTimeEmbedDim / 2; ++k) {
        const double angle = M_PI * std::ldexp(tau, k);  // pi * tau * 2^k
        out[2 * k] = std::sin(angle);
        out[2 * k + 1] = std::cos(angle);
    }
}

/// Forward-pass activations, kept for backprop.
struct Forward {
    int n = 0;
    std::size_t E = 0;
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> feats;        // E x F
    std::vector<double> e0, e1, e2;   // E x H
    std::vector<double> m1, m2;       // n x H
    std::vector<double> logits, probs;  // E
};

void aggregate_nodes(const std::vector<std::pair<int, int>>& pairs, const std::vector<double>& edge,
                     int n, int H, std::vector<double>& node) {
    node.assign(static_cast<std::size_t>(n) * H, 0.0);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
        const auto [i, j] = pairs[e];
        for (int h = 0; h < H; ++h) {
            const double v = edge[e * H + h];
            node[static_cast<std::size_t>(i) * H + h] += v;
            node[static_cast<std::size_t>(j) * H + h] += v;
        }
    }
    const double inv = 1.0 / static_cast<double>(n - 1);
    for (double& v : node) v *= inv;
}

void run_forward(const DenoiserParams& params, const Instance& instance,
                 const EdgeStateField& x_t, int t, Forward& fw) {
    if (x_t.n() != instance.n())
        throw DimensionError("state field has n=" + std::to_string(x_t.n()) +
                             ", instance has n=" + std::to_string(instance.n()));
    const Layout L(params.hidden);
    if (params.values.size() != L.total) throw DimensionError("parameter vector has wrong size");
    const int n = instance.n();
    const int H = L.H;
    const double* v = params.values.data();

    fw.n = n;
    EdgeStateField indexer(n, EdgeStateField::Kind::soft);
    fw.E = indexer.pair_count();
    fw.pairs.resize(fw.E);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) fw.pairs[indexer.pair_index(i, j)] = {i, j};

    const std::vector<double> statics = static_pair_features(instance);
    double temb[kTimeEmbedDim];
    time_embedding(t, params.t_max, temb);

    fw.feats.assign(fw.E * kF, 0.0);
    for (std::size_t e = 0; e < fw.E; ++e) {
        const auto [i, j] = fw.pairs[e];
        double* f = &fw.feats[e * kF];
        f[0] = statics[e * 3 + 0];
        f[1] = statics[e * 3 + 1];
        f[2] = statics[e * 3 + 2];
        f[3] = x_t.at(i, j);
        std::copy(temb, temb + kTimeEmbedDim, f + 4);
    }

    // Embedding: e0 = tanh(W0 f + b0)
    fw.e0.assign(fw.E * H, 0.0);
    for (std::size_t e = 0; e < fw.E; ++e) {
        const double* f = &fw.feats[e * kF];
        for (int h = 0; h < H; ++h) {
            double acc = v[L.b0 + h];
            const double* w = v + L.w0 + static_cast<std::size_t>(h) * kF;
            for (int k = 0; k < kF; ++k) acc += w[k] * f[k];
            fw.e0[e * H + h] = std::tanh(acc);
        }
    }

    auto message_round = [&](const std::vector<double>& in, std::vector<double>& node,
                             std::size_t w_off, std::size_t u_off, std::size_t b_off,
                             std::vector<double>& out) {
        aggregate_nodes(fw.pairs, in, n, H, node);
        out.assign(fw.E * H, 0.0);
        for (std::size_t e = 0; e < fw.E; ++e) {
            const auto [i, j] = fw.pairs[e];
            const double* mi = &node[static_cast<std::size_t>(i) * H];
            const double* mj = &node[static_cast<std::size_t>(j) * H];
            for (int h = 0; h < H; ++h) {
                double acc = v[b_off + h];
                const double* w = v + w_off + static_cast<std::size_t>(h) * H;
                const double* u = v + u_off + static_cast<std::size_t>(h) * H;
                for (int g = 0; g < H; ++g) acc += w[g] * in[e * H + g] + u[g] * (mi[g] + mj[g]);
                out[e * H + h] = std::tanh(acc);
            }
        }
    };

    message_round(fw.e0, fw.m1, L.w1, L.u1, L.b1, fw.e1);
    message_round(fw.e1, fw.m2, L.w2, L.u2, L.b2, fw.e2);

    fw.logits.assign(fw.E, 0.0);
    fw.probs.assign(fw.E, 0.0);
    for (std::size_t e = 0; e < fw.E; ++e) {
        double acc = v[L.b_out];
        for (int h = 0; h < H; ++h) acc += v[L.w_out + h] * fw.e2[e * H + h];
        fw.logits[e] = acc;
        fw.probs[e] = stable_sigmoid(acc);
    }
}

/// Backprop of d(loss)/d(logit) into the parameter gradient. `gz` holds the
/// already-normalized per-edge logit gradients.
void run_backward(const DenoiserParams& params, const Forward& fw, const std::vector<double>& gz,
                  std::vector<double>& grad) {
    const Layout L(params.hidden);
    const int n = fw.n;
    const int H = L.H;
    const double* v = params.values.data();
    const double inv_deg = 1.0 / static_cast<double>(n - 1);

    std::vector<double> ge(fw.E * H, 0.0);      // gradient w.r.t. an edge activation
    std::vector<double> gpre(fw.E * H, 0.0);    // ... w.r.t. its pre-activation
    std::vector<double> gnode(static_cast<std::size_t>(n) * H, 0.0);

    // Readout.
    for (std::size_t e = 0; e < fw.E; ++e) {
        grad[L.b_out] += gz[e];
        for (int h = 0; h < H; ++h) {
            grad[L.w_out + h] += gz[e] * fw.e2[e * H + h];
            ge[e * H + h] = gz[e] * v[L.w_out + h];
        }
    }

    auto backprop_round = [&](const std::vector<double>& out, const std::vector<double>& in,
                              const std::vector<double>& node, std::size_t w_off,
                              std::size_t u_off, std::size_t b_off,
                              std::vector<double>& ge_in) {
        for (std::size_t e = 0; e < fw.E; ++e)
            for (int h = 0; h < H; ++h) {
                const double a = out[e * H + h];
                gpre[e * H + h] = ge[e * H + h] * (1.0 - a * a);
            }

        std::fill(gnode.begin(), gnode.end(), 0.0);
        ge_in.assign(fw.E * H, 0.0);
        for (std::size_t e = 0; e < fw.E; ++e) {
            const auto [i, j] = fw.pairs[e];
            const double* mi = &node[static_cast<std::size_t>(i) * H];
            const double* mj = &node[static_cast<std::size_t>(j) * H];
            for (int h = 0; h < H; ++h) {
                const double g = gpre[e * H + h];
                if (g == 0.0) continue;
                grad[b_off + h] += g;
                double* gw = grad.data() + w_off + static_cast<std::size_t>(h) * H;
                double* gu = grad.data() + u_off + static_cast<std::size_t>(h) * H;
                const double* w = v + w_off + static_cast<std::size_t>(h) * H;
                const double* u = v + u_off + static_cast<std::size_t>(h) * H;
                for (int g2 = 0; g2 < H; ++g2) {
                    gw[g2] += g * in[e * H + g2];
                    gu[g2] += g * (mi[g2] + mj[g2]);
                    ge_in[e * H + g2] += g * w[g2];
                    gnode[static_cast<std::size_t>(i) * H + g2] += g * u[g2];
                    gnode[static_cast<std::size_t>(j) * H + g2] += g * u[g2];
                }
            }
        }
        // Mean aggregation: each node gradient flows back to incident edges.
        for (std::size_t e = 0; e < fw.E; ++e) {
            const auto [i, j] = fw.pairs[e];
            for (int h = 0; h < H; ++h)
                ge_in[e * H + h] += (gnode[static_cast<std::size_t>(i) * H + h] +
                                     gnode[static_cast<std::size_t>(j) * H + h]) *
                                    inv_deg;
        }
    };

    std::vector<double> ge1, ge0;
    backprop_round(fw.e2, fw.e1, fw.m2, L.w2, L.u2, L.b2, ge1);
    ge.swap(ge1);
    backprop_round(fw.e1, fw.e0, fw.m1, L.w1, L.u1, L.b1, ge0);
    ge.swap(ge0);

    // Embedding layer.
    for (std::size_t e = 0; e < fw.E; ++e)
        for (int h = 0; h < H; ++h) {
            const double a = fw.e0[e * H + h];
            const double g = ge[e * H + h] * (1.0 - a * a);
            if (g == 0.0) continue;
            grad[L.b0 + h] += g;
            double* gw = grad.data() + L.w0 + static_cast<std::size_t>(h) * kF;
            const double* f = &fw.feats[e * kF];
            for (int k = 0; k < kF; ++k) gw[k] += g * f[k];
        }
}

}  // namespace

std::size_t DenoiserParams::value_count(int hidden) { return Layout(hidden).total; }

DenoiserParams DenoiserParams::zeros(int hidden, int t_max) {
    DenoiserParams p;
    p.hidden = hidden;
    p.t_max = t_max;
    p.values.assign(value_count(hidden), 0.0);
    return p;
}

DenoiserParams DenoiserParams::random_init(int hidden, int t_max, CounterRng& rng) {
    DenoiserParams p = zeros(hidden, t_max);
    const Layout L(hidden);
    auto fill = [&](std::size_t offset, std::size_t count, int fan_in) {
        const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (std::size_t k = 0; k < count; ++k)
            p.values[offset + k] = (2.0 * rng.next_unit() - 1.0) * r;
    };
    const std::size_t h = static_cast<std::size_t>(hidden);
    fill(L.w0, h * kF, kF);
    fill(L.w1, h * h, hidden);
    fill(L.u1, h * h, hidden);
    fill(L.w2, h * h, hidden);
    fill(L.u2, h * h, hidden);
    fill(L.w_out, h, hidden);
    // Biases start at zero.
    return p;
}

bool DenoiserParams::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

EdgeStateField denoise(const DenoiserParams& params, const Instance& instance,
                       const EdgeStateField& x_t, int t) {
    Forward fw;
    run_forward(params, instance, x_t, t, fw);
    EdgeStateField out(instance.n(), EdgeStateField::Kind::soft);
    for (std::size_t e = 0; e < fw.E; ++e) out.set(fw.pairs[e].first, fw.pairs[e].second, fw.probs[e]);
    return out;
}

EdgeStateField oracle_denoise(const Instance& instance, const EdgeStateField& x_t, int t,
                              const Tour& known_optimal) {
    (void)x_t;
    (void)t;
    constexpr double eps = 1e-6;
    const EdgeStateField adjacency = tour_to_adjacency(known_optimal);
    EdgeStateField out(instance.n(), EdgeStateField::Kind::soft);
    for (int i = 0; i < instance.n(); ++i)
        for (int j = i + 1; j < instance.n(); ++j)
            out.set(i, j, adjacency.at(i, j) > 0.5 ? 1.0 - eps : eps);
    return out;
}

std::pair<double, DenoiserParams> loss_and_grad(const DenoiserParams& params,
                                                const std::vector<TrainingSample>& batch,
                                                const LossOptions& options) {
    if (batch.empty()) throw ConfigError("empty batch");
    DenoiserParams grad = DenoiserParams::zeros(params.hidden, params.t_max);
    double loss = 0.0;
    const double inv_batch = 1.0 / static_cast<double>(batch.size());

    Forward fw;
    std::vector<double> gz;
    for (const TrainingSample& sample : batch) {
        run_forward(params, *sample.instance, *sample.x_t, sample.t, fw);
        const int n = sample.instance->n();
        const double pos_weight =
            options.positive_weight > 0.0 ? options.positive_weight : (n - 2) / 2.0;

        double weight_total = 0.0;
        for (std::size_t e = 0; e < fw.E; ++e) {
            const auto [i, j] = fw.pairs[e];
            const double y = sample.target->at(i, j);
            weight_total += 1.0 + (pos_weight - 1.0) * y;
        }

        gz.assign(fw.E, 0.0);
        double sample_loss = 0.0;
        for (std::size_t e = 0; e < fw.E; ++e) {
            const auto [i, j] = fw.pairs[e];
            const double y = sample.target->at(i, j);
            const double w = 1.0 + (pos_weight - 1.0) * y;
            const double z = fw.logits[e];
            sample_loss += w * (softplus(z) - y * z);
            gz[e] = w * (fw.probs[e] - y) / weight_total * inv_batch;
        }
        loss += sample_loss / weight_total * inv_batch;
        run_backward(params, fw, gz, grad.values);
    }
    return {loss, std::move(grad)};
}

Checkpoint train(const TrainingConfig& config,
                 const std::vector<std::pair<Instance, Tour>>& dataset, const Checkpoint* init) {
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();

    if (dataset.empty()) throw ConfigError("training dataset is empty");
    if (config.target_mode == TrainingConfig::TargetMode::equivalence_class && config.n < 5)
        throw ConfigError("equivalence-class training needs n >= 5");
    for (const auto& [instance, label] : dataset) {
        if (instance.n() != config.n)
            throw ConfigError("dataset instance '" + instance.id() + "' has n=" +
                              std::to_string(instance.n()) + ", config expects " +
                              std::to_string(config.n));
        if (label.n() != instance.n() || !label.is_valid())
            throw DataError("label for '" + instance.id() + "' is not a Hamiltonian tour");
    }

    const DiffusionSchedule schedule =
        make_schedule(config.T, config.beta_min, config.beta_max, 1, config.beta_curve);

    CounterRng root(config.seed);
    CounterRng init_rng = root.derive(0);
    CounterRng order_rng = root.derive(1);
    CounterRng t_rng = root.derive(2);
    CounterRng noise_rng = root.derive(3);
    CounterRng target_rng = root.derive(4);

    DenoiserParams params;
    if (init) {
        if (init->params.t_max != config.T)
            throw ConfigError("init checkpoint was trained with T=" +
                              std::to_string(init->params.t_max) + ", config has T=" +
                              std::to_string(config.T));
        params = init->params;
    } else {
        params = DenoiserParams::random_init(config.hidden, config.T, init_rng);
    }

    const std::size_t count = dataset.size();
    std::vector<EdgeStateField> dirac_targets;
    dirac_targets.reserve(count);
    for (const auto& [instance, label] : dataset) dirac_targets.push_back(tour_to_adjacency(label));

    const LossOptions loss_options{config.reweight_positives ? -1.0 : 1.0};
    std::vector<double> velocity(params.values.size(), 0.0);
    std::vector<double> loss_curve;
    loss_curve.reserve(config.epochs);

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::vector<EdgeStateField> epoch_targets;
    const bool equivalence = config.target_mode == TrainingConfig::TargetMode::equivalence_class;
    const bool redraw_per_step =
        equivalence && config.equivalence_redraw == TrainingConfig::RedrawPolicy::per_step;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (equivalence && !redraw_per_step) {
            epoch_targets.clear();
            epoch_targets.reserve(count);
            for (const auto& [instance, label] : dataset)
                epoch_targets.push_back(tour_to_adjacency(sample_equivalence_target(label, target_rng)));
        }

        for (std::size_t k = count; k > 1; --k)
            std::swap(order[k - 1], order[order_rng.next_below(k)]);

        double epoch_loss = 0.0;
        std::size_t cursor = 0;
        while (cursor < count) {
            const std::size_t batch_end = std::min(cursor + static_cast<std::size_t>(config.batch_size), count);
            const std::size_t batch_count = batch_end - cursor;

            std::vector<EdgeStateField> states;
            std::vector<EdgeStateField> step_targets;
            states.reserve(batch_count);
            step_targets.reserve(batch_count);
            std::vector<TrainingSample> batch(batch_count);
            for (std::size_t b = 0; b < batch_count; ++b) {
                const std::size_t idx = order[cursor + b];
                const EdgeStateField* target = nullptr;
                if (redraw_per_step) {
                    step_targets.push_back(
                        tour_to_adjacency(sample_equivalence_target(dataset[idx].second, target_rng)));
                    target = &step_targets.back();
                } else {
                    target = equivalence ? &epoch_targets[idx] : &dirac_targets[idx];
                }
                const int t = 1 + static_cast<int>(t_rng.next_below(static_cast<std::uint64_t>(config.T)));
                states.push_back(forward_sample(*target, t, schedule, noise_rng));
                batch[b] = {&dataset[idx].first, &states.back(), t, target};
            }

            const auto [loss, grad] = loss_and_grad(params, batch, loss_options);
            for (std::size_t k = 0; k < params.values.size(); ++k) {
                velocity[k] = config.momentum * velocity[k] + grad.values[k];
                params.values[k] -= config.learning_rate * velocity[k];
            }
            if (!params.all_finite())
                throw Error("training diverged: non-finite parameters at epoch " +
                            std::to_string(epoch));
            epoch_loss += loss * static_cast<double>(batch_count);
            cursor = batch_end;
        }
        loss_curve.push_back(epoch_loss / static_cast<double>(count));
    }

    Checkpoint checkpoint;
    checkpoint.params = std::move(params);
    checkpoint.config = config;
    checkpoint.config.dataset_size = static_cast<int>(count);
    checkpoint.loss_curve = std::move(loss_curve);
    checkpoint.wall_seconds = std::chrono::duration<double>(clock::now() - started).count();
    return checkpoint;
}

namespace {

void write_bytes(std::ostream& out, const void* data, std::size_t count) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(count));
}

void write_u8(std::ostream& out, std::uint8_t v) { write_bytes(out, &v, 1); }

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
    write_bytes(out, b, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
    write_bytes(out, b, 8);
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}

std::uint8_t read_u8(std::istream& in) {
    char c = 0;
    if (!in.get(c)) throw ParseError("truncated checkpoint");
    return static_cast<std::uint8_t>(c);
}

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(read_u8(in)) << (8 * k);
    return v;
}

std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(read_u8(in)) << (8 * k);
    return v;
}

double read_f64(std::istream& in) {
    const std::uint64_t bits = read_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

constexpr char kMagic[8] = {'I', 'D', 'E', 'Q', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, std::ostream& out) {
    write_bytes(out, kMagic, 8);
    write_u32(out, kFormatVersion);

    const TrainingConfig& c = checkpoint.config;
    write_u8(out, c.target_mode == TrainingConfig::TargetMode::dirac ? 0 : 1);
    write_u8(out, c.equivalence_redraw == TrainingConfig::RedrawPolicy::per_epoch ? 0 : 1);
    write_u8(out, c.reweight_positives ? 1 : 0);
    write_u8(out, c.beta_curve == DiffusionSchedule::BetaCurve::linear ? 0 : 1);
    write_u32(out, static_cast<std::uint32_t>(c.n));
    write_u32(out, static_cast<std::uint32_t>(c.epochs));
    write_u32(out, static_cast<std::uint32_t>(c.batch_size));
    write_u32(out, static_cast<std::uint32_t>(c.dataset_size));
    write_u64(out, c.seed);
    write_f64(out, c.learning_rate);
    write_f64(out, c.momentum);
    write_u32(out, static_cast<std::uint32_t>(c.T));
    write_f64(out, c.beta_min);
    write_f64(out, c.beta_max);
    write_u32(out, static_cast<std::uint32_t>(c.hidden));

    write_u32(out, static_cast<std::uint32_t>(checkpoint.params.hidden));
    write_u32(out, static_cast<std::uint32_t>(checkpoint.params.t_max));
    write_u64(out, checkpoint.params.values.size());
    for (double v : checkpoint.params.values) write_f64(out, v);

    write_u32(out, static_cast<std::uint32_t>(checkpoint.loss_curve.size()));
    for (double v : checkpoint.loss_curve) write_f64(out, v);
    write_f64(out, checkpoint.wall_seconds);
    if (!out) throw Error("failed writing checkpoint");
}

Checkpoint load_checkpoint(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ParseError("not a checkpoint file");
    const std::uint32_t version = read_u32(in);
    if (version != kFormatVersion)
        throw ParseError("unsupported checkpoint version " + std::to_string(version));

    Checkpoint checkpoint;
    TrainingConfig& c = checkpoint.config;
    c.target_mode = read_u8(in) == 0 ? TrainingConfig::TargetMode::dirac
                                     : TrainingConfig::TargetMode::equivalence_class;
    c.equivalence_redraw = read_u8(in) == 0 ? TrainingConfig::RedrawPolicy::per_epoch
                                            : TrainingConfig::RedrawPolicy::per_step;
    c.reweight_positives = read_u8(in) != 0;
    c.beta_curve = read_u8(in) == 0 ? DiffusionSchedule::BetaCurve::linear
                                    : DiffusionSchedule::BetaCurve::cosine;
    c.n = static_cast<int>(read_u32(in));
    c.epochs = static_cast<int>(read_u32(in));
    c.batch_size = static_cast<int>(read_u32(in));
    c.dataset_size = static_cast<int>(read_u32(in));
    c.seed = read_u64(in);
    c.learning_rate = read_f64(in);
    c.momentum = read_f64(in);
    c.T = static_cast<int>(read_u32(in));
    c.beta_min = read_f64(in);
    c.beta_max = read_f64(in);
    c.hidden = static_cast<int>(read_u32(in));

    checkpoint.params.hidden = static_cast<int>(read_u32(in));
    checkpoint.params.t_max = static_cast<int>(read_u32(in));
    const std::uint64_t count = read_u64(in);
    if (count != DenoiserParams::value_count(checkpoint.params.hidden))
        throw ParseError("checkpoint parameter count does not match its architecture");
    checkpoint.params.values.resize(count);
    for (std::uint64_t k = 0; k < count; ++k) checkpoint.params.values[k] = read_f64(in);

    const std::uint32_t curve = read_u32(in);
    checkpoint.loss_curve.resize(curve);
    for (std::uint32_t k = 0; k < curve; ++k) checkpoint.loss_curve[k] = read_f64(in);
    checkpoint.wall_seconds = read_f64(in);
    return checkpoint;
}

void save_checkpoint_file(const Checkpoint& checkpoint, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    save_checkpoint(checkpoint, out);
}

Checkpoint load_checkpoint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return load_checkpoint(in);
}

}  // namespace ideq
