#ifndef MCS_RNG_HPP
#define MCS_RNG_HPP

#include <cstdint>
#include <vector>

namespace mcs {

// Deterministic PRNG with portable helpers. std::mt19937_64 is specified
// bit-exactly, but the standard distributions are not; the helpers below
// produce identical streams on every platform and compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n), n > 0.
    std::uint64_t next_below(std::uint64_t n) {
        // rejection sampling to avoid modulo bias
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return next_double() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Derives an independent stream for a sub-computation (trial index,
    /// worker index, ...) without perturbing this stream.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed ^ (0xd1b54a32d192ed03ULL * (index + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace mcs

#endif
