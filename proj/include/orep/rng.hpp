#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace orep {

// Deterministic random stream. All sampling goes through this wrapper so
// that runs are reproducible across platforms and standard-library
// versions (std::uniform_int_distribution is implementation-defined, the
// mt19937_64 output sequence is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Derives an independent stream from a master seed and a path of
    // indices, e.g. (seed, ontology index, trial index). Streams with
    // different paths are uncorrelated for practical purposes.
    static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
        std::uint64_t state = master;
        for (std::uint64_t p : path) state = split_mix(state + 0x9e3779b97f4a7c15ULL * (p + 1));
        return Rng(split_mix(state));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, n). Rejection sampling keeps the distribution exact.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& values) {
        return values[static_cast<std::size_t>(below(values.size()))];
    }

private:
    static std::uint64_t split_mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace orep
