#include "ideq/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include "ideq/errors.hpp"
#include "ideq/local_search.hpp"

namespace ideq {
namespace {

Tour random_tour(int n, CounterRng& rng) {
    Tour tour;
    tour.order.resize(n);
    std::iota(tour.order.begin(), tour.order.end(), 0);
    for (int k = n; k > 1; --k)
        std::swap(tour.order[k - 1], tour.order[rng.next_below(static_cast<std::uint64_t>(k))]);
    return tour;
}

struct Cell {
    std::size_t instance_index;
    std::size_t method_index;
    int repetition;
};

}  // namespace

int default_thread_count() {
    if (const char* env = std::getenv("IDEQ_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

BenchOutput run_benchmark(const std::vector<Instance>& instances,
                          const std::vector<double>& reference_lengths,
                          const std::vector<MethodConfig>& methods, const BenchOptions& options) {
    if (instances.size() != reference_lengths.size())
        throw DimensionError("reference list does not match instance list");
    if (options.repetitions < 1) throw ConfigError("repetitions must be >= 1");
    for (const MethodConfig& method : methods)
        if (method.kind == MethodConfig::Kind::solver && method.checkpoint == nullptr)
            throw ConfigError("method '" + method.name + "' has no checkpoint");

    std::vector<Cell> cells;
    cells.reserve(instances.size() * methods.size() * static_cast<std::size_t>(options.repetitions));
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (std::size_t m = 0; m < methods.size(); ++m)
            for (int r = 0; r < options.repetitions; ++r) cells.push_back({i, m, r});

    const CounterRng master(options.seed);
    std::vector<BenchRow> rows(cells.size());
    std::vector<std::string> errors(cells.size());

    auto run_cell = [&](std::size_t index) {
        const Cell& cell = cells[index];
        const Instance& instance = instances[cell.instance_index];
        const MethodConfig& method = methods[cell.method_index];
        const std::uint64_t cell_seed = master.derive(cell.instance_index)
                                            .derive(cell.method_index)
                                            .derive(static_cast<std::uint64_t>(cell.repetition))
                                            .key();

        BenchRow row;
        row.instance_id = instance.id();
        row.n = instance.n();
        row.method = method.name;
        row.seed = cell_seed;

        const auto started = std::chrono::steady_clock::now();
        try {
            if (method.kind == MethodConfig::Kind::two_opt_random) {
                CounterRng rng(cell_seed);
                row.length = tour_length(instance, two_opt(instance, random_tour(instance.n(), rng)));
            } else {
                SolveConfig config = method.solve_config;
                config.seed = cell_seed;
                row.length = solve(instance, *method.checkpoint, config).length;
            }
            const double reference = reference_lengths[cell.instance_index];
            if (std::isfinite(reference) && reference > 0.0) {
                row.ref_length = reference;
                row.gap = optimality_gap(row.length, reference).gap;
            } else {
                row.ref_length = std::numeric_limits<double>::quiet_NaN();
                row.gap = std::numeric_limits<double>::quiet_NaN();
                errors[index] = "missing reference length for '" + instance.id() + "'";
            }
        } catch (const std::exception& error) {
            row.length = std::numeric_limits<double>::quiet_NaN();
            row.ref_length = std::numeric_limits<double>::quiet_NaN();
            row.gap = std::numeric_limits<double>::quiet_NaN();
            errors[index] = "cell (" + instance.id() + ", " + method.name + "): " + error.what();
        }
        if (!options.zero_time)
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        rows[index] = std::move(row);
    };

    const int threads = std::min<int>(options.threads > 0 ? options.threads : default_thread_count(),
                                      static_cast<int>(cells.size()));
    if (threads <= 1) {
        for (std::size_t index = 0; index < cells.size(); ++index) run_cell(index);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t index = next.fetch_add(1);
                    if (index >= cells.size()) return;
                    run_cell(index);
                }
            });
        for (std::thread& worker : pool) worker.join();
    }

    BenchOutput output;
    output.rows = std::move(rows);
    for (std::string& message : errors)
        if (!message.empty()) output.errors.push_back(std::move(message));

    // Per-method variance over repetitions, per instance, pooled as the mean
    // of per-instance standard deviations.
    std::map<std::string, std::map<std::string, std::vector<double>>> gaps;
    for (const BenchRow& row : output.rows)
        if (std::isfinite(row.gap)) gaps[row.method][row.instance_id].push_back(row.gap);
    for (const auto& [method, per_instance] : gaps) {
        VarianceReport report;
        double pooled = 0.0;
        for (const auto& [instance_id, values] : per_instance) {
            double mean = 0.0;
            for (double g : values) mean += g;
            mean /= static_cast<double>(values.size());
            double var = 0.0;
            for (double g : values) var += (g - mean) * (g - mean);
            var /= static_cast<double>(values.size());
            const double sd = std::sqrt(var);
            report.per_instance.push_back(
                {instance_id, mean, sd, static_cast<int>(values.size())});
            pooled += sd;
        }
        report.pooled_std = pooled / static_cast<double>(report.per_instance.size());
        output.variance.emplace_back(method, std::move(report));
    }
    return output;
}

BenchOutput run_ablation(const std::vector<Instance>& instances,
                         const std::vector<double>& reference_lengths, const Checkpoint& dirac,
                         const Checkpoint& equivalence, const SolveConfig& base,
                         const BenchOptions& options) {
    auto method = [&](const std::string& name, const Checkpoint& checkpoint, ProjectionMode mode) {
        MethodConfig config;
        config.name = name;
        config.kind = MethodConfig::Kind::solver;
        config.checkpoint = &checkpoint;
        config.solve_config = base;
        config.solve_config.projection_mode = mode;
        return config;
    };

    const std::vector<MethodConfig> methods = {
        method("ideq+eq", equivalence, ProjectionMode::ideq),
        method("ideq+dirac", dirac, ProjectionMode::ideq),
        method("decode2opt+eq", equivalence, ProjectionMode::decode_only),
        method("decode2opt+dirac", dirac, ProjectionMode::decode_only),
        method("threshold+eq", equivalence, ProjectionMode::none),
        method("threshold+dirac", dirac, ProjectionMode::none),
    };
    return run_benchmark(instances, reference_lengths, methods, options);
}

double sign_test_p_value(int wins, int losses) {
    const int trials = wins + losses;
    if (trials == 0) return 1.0;
    // P(X >= wins), X ~ Binomial(trials, 1/2), summed in log space.
    double p = 0.0;
    for (int k = wins; k <= trials; ++k) {
        double log_term = -trials * std::log(2.0);
        for (int j = 1; j <= k; ++j)
            log_term += std::log(static_cast<double>(trials - k + j)) - std::log(static_cast<double>(j));
        p += std::exp(log_term);
    }
    return std::min(p, 1.0);
}

std::string histogram_csv(std::vector<double> values, int bins) {
    if (bins < 1) throw ConfigError("bins must be >= 1");
    std::string out = "bin_lo,bin_hi,count,density\n";
    if (values.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double width = std::max(*hi_it - lo, 1e-12) / bins;
    std::vector<int> counts(bins, 0);
    for (double v : values) {
        int bin = static_cast<int>((v - lo) / width);
        counts[std::clamp(bin, 0, bins - 1)]++;
    }
    char line[128];
    for (int b = 0; b < bins; ++b) {
        const double density = counts[b] / (static_cast<double>(values.size()) * width);
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%d,%.17g\n", lo + b * width,
                      lo + (b + 1) * width, counts[b], density);
        out += line;
    }
    return out;
}

}  // namespace ideq
