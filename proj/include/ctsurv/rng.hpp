#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ctsurv/math_util.hpp"

namespace ctsurv {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded RNG stream. Variate generation is implemented directly (inverse-CDF
// normal, log-transform exponential) so draw sequences do not depend on the
// standard library's distribution internals; substreams are derived by
// hashing the parent seed with a stream id, which keeps parallel chains and
// replications reproducible regardless of thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    Rng derive(std::uint64_t stream) const {
        return Rng(splitmix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
    }

    // Uniform on [0, 1).
    double uniform() {
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer on [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    double normal() {
        double u = uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        return std_normal_quantile(u);
    }

    double normal(double mu, double sd) { return mu + sd * normal(); }

    double exponential() { return -std::log1p(-uniform()); }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace ctsurv
