#pragma once

#include <cstdint>

namespace ideq {

/// Counter-based pseudo-random generator.
///
/// Every draw is a pure function of (key, counter), so a sequence of draws
/// can be reproduced from any position and split across threads without
/// shared state. Streams for sub-tasks are derived with derive(), never by
/// reusing the parent key.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(seed) {}

    /// Value at an absolute counter position; does not advance the stream.
    std::uint64_t at(std::uint64_t counter) const {
        return mix(key_ + golden_ * (counter + 1));
    }

    /// Uniform double in [0, 1) at an absolute counter position.
    double unit_at(std::uint64_t counter) const {
        // 53 high bits -> exactly representable in [0,1).
        return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return at(counter_++); }

    double next_unit() { return unit_at(counter_++); }

    /// Uniform integer in [0, bound) via rejection (exact, no modulo bias).
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            const std::uint64_t v = next_u64();
            if (v < limit) return v % bound;
        }
    }

    /// Independent sub-stream labelled by `stream`.
    CounterRng derive(std::uint64_t stream) const {
        return CounterRng(mix(key_ ^ mix(stream + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }
    void skip(std::uint64_t n) { counter_ += n; }

private:
    // SplitMix64 finalizer; bijective on 64-bit words.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t golden_ = 0x9e3779b97f4a7c15ULL;

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace ideq
