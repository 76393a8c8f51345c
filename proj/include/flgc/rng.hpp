#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace flgc {

// splitmix64 mixing step. Also used standalone to fan a base seed out into
// independent per-run / per-restart stream seeds, so that e.g. run 3 of a
// 30-repeat experiment is reproducible in isolation.
inline std::uint64_t splitmix64_mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64_mix(splitmix64_mix(base) ^ splitmix64_mix(stream ^ 0x5851f42d4c957f2dULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t s1, std::uint64_t s2) {
    return derive_seed(derive_seed(base, s1), s2);
}

// Self-contained generator (splitmix64 sequence) so that every sampled value
// is identical across platforms and standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n >= 1. Multiply-shift keeps it unbiased.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n)) >> 64);
    }

    // Standard normal via Box-Muller (one value per call; no hidden cache).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace flgc
