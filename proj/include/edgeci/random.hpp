#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace edgeci {

/// Seedable random source.
///
/// Independent sub-streams are derived from a master seed plus a path of
/// integer keys (replication index, method index, replicate index, ...), so
/// work split across threads draws exactly the numbers a sequential run would.
class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed);

    /// Sub-stream keyed by `path` below `seed`.
    static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n).
    std::size_t uniform_index(std::size_t n);

    /// Uniform real in (0, 1).
    double uniform_open();

    /// Gamma variate with the given shape and scale (mean shape * scale).
    double gamma(double shape, double scale);

    engine_type& engine() { return engine_; }

private:
    engine_type engine_;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed drawn from std::random_device, for runs where the caller gives none.
std::uint64_t entropy_seed();

}  // namespace edgeci
