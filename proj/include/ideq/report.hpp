#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ideq {

/// One benchmark result cell: a (instance, method, repetition) outcome.
struct BenchRow {
    std::string instance_id;
    int n = 0;
    std::string method;
    double length = 0.0;
    double ref_length = 0.0;
    double gap = 0.0;  // fraction, not percent
    double seconds = 0.0;
    std::uint64_t seed = 0;
};

/// Gap statistics over repeated runs, per instance and pooled.
struct VarianceReport {
    struct PerInstance {
        std::string instance_id;
        double mean_gap = 0.0;
        double std_gap = 0.0;  // population standard deviation over repeats
        int repetitions = 0;
    };

    std::vector<PerInstance> per_instance;
    double pooled_std = 0.0;  // mean of per-instance standard deviations
};

}  // namespace ideq
