#ifndef STABLE_STREAMS_RNG_HPP
#define STABLE_STREAMS_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace stable_streams {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

// mt19937_64 is fully specified by the standard, so sequences are portable.
// The std distributions are not; the helpers below replace them.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n) by rejection, bias-free.
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("bounded: n must be > 0");
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = eng_();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform integer in [lo, hi], inclusive.
    long long uniform_int(long long lo, long long hi) {
        if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
        return lo + static_cast<long long>(bounded(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace stable_streams

#endif
