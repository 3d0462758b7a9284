#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ideq/instance.hpp"
#include "ideq/report.hpp"
#include "ideq/solver.hpp"

namespace ideq {

/// One configured pipeline to benchmark.
struct MethodConfig {
    enum class Kind {
        two_opt_random,  // 2-opt from a uniformly random tour
        solver,          // diffusion solver with `solve_config` and `checkpoint`
    };

    std::string name;
    Kind kind = Kind::two_opt_random;
    const Checkpoint* checkpoint = nullptr;  // required for Kind::solver
    SolveConfig solve_config;                // seed field is ignored; cells derive their own
};

struct BenchOptions {
    int repetitions = 1;
    std::uint64_t seed = 0;
    int threads = 0;        // 0: use IDEQ_THREADS or hardware_concurrency
    bool zero_time = false; // write 0 in the seconds column (reproducible bytes)
};

struct BenchOutput {
    std::vector<BenchRow> rows;
    /// One variance report per method, sorted by method name.
    std::vector<std::pair<std::string, VarianceReport>> variance;
    /// Per-cell failures (missing reference, solver error); the run continues.
    std::vector<std::string> errors;
};

/// Runs every method on every instance `repetitions` times in a work pool.
/// Cell seeds derive from the top-level seed as
/// CounterRng(seed).derive(instance_index).derive(method_index).derive(rep),
/// so results do not depend on thread scheduling. `reference_lengths` is
/// parallel to `instances`; a missing (NaN) reference records an error row.
BenchOutput run_benchmark(const std::vector<Instance>& instances,
                          const std::vector<double>& reference_lengths,
                          const std::vector<MethodConfig>& methods, const BenchOptions& options);

/// The ablation grid over {dirac, equivalence} checkpoints x {full
/// projection, decode+final 2-opt} plus the thresholded-field extras,
/// sharing one schedule and seed.
BenchOutput run_ablation(const std::vector<Instance>& instances,
                         const std::vector<double>& reference_lengths, const Checkpoint& dirac,
                         const Checkpoint& equivalence, const SolveConfig& base,
                         const BenchOptions& options);

/// Exact one-sided sign-test p-value: P(X >= wins) for X ~ Binomial(wins +
/// losses, 1/2). Ties are excluded by the caller.
double sign_test_p_value(int wins, int losses);

/// Gap histogram as CSV (`bin_lo,bin_hi,count,density`), the plotting
/// artifact of the variance analysis.
std::string histogram_csv(std::vector<double> values, int bins);

/// Thread count from IDEQ_THREADS, else hardware concurrency.
int default_thread_count();

}  // namespace ideq
