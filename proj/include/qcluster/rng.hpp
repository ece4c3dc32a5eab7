#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qcluster {

/// Identifier recorded in every output file so published numbers can be
/// regenerated. Bump the suffix whenever the stream layout changes.
inline constexpr std::string_view kRngName = "mt19937_64+splitmix64/v1";

/// One step of SplitMix64. Used only to derive seeds, never as a stream.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of substream `stream` under `master`. Run i of an experiment uses
/// derive_seed(master, i); nested purposes derive again from that seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Seedable generator with platform-independent output. The engine is the
/// standard mt19937_64; all variates are built from its raw 64-bit words
/// rather than from <random> distributions, whose algorithms are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t uniform_index(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (one variate per call, no caching).
    double normal();

private:
    std::mt19937_64 engine_;
};

} // namespace qcluster
