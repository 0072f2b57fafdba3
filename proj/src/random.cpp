#include "edgeci/random.hpp"

namespace edgeci {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

Rng Rng::substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = mix_seed(seed);
    for (std::uint64_t key : path) {
        state = mix_seed(state ^ mix_seed(key + 0x632be59bd9b4e019ULL));
    }
    return Rng(state);
}

std::size_t Rng::uniform_index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

double Rng::uniform_open() {
    // 53 random bits mapped to the open interval.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::gamma(double shape, double scale) {
    std::gamma_distribution<double> dist(shape, scale);
    return dist(engine_);
}

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace edgeci
