#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace qevo {

// Deterministic random source. Every stochastic routine in the library draws
// through this wrapper instead of <random> distributions, so a seed pins the
// exact draw sequence independently of the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

    // uniform double in [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform double in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [lo, hi], inclusive, unbiased
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(eng_());
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return lo + static_cast<std::int64_t>(v % span);
    }

    bool coin(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace qevo
