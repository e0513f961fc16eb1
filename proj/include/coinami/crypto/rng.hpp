#pragma once

#include <cstdint>
#include <vector>

namespace coinami::crypto {

/// SplitMix64 (Steele/Lea/Flood; Vigna's reference constants).
/// 64 bits of state; fully determined by the seed, so assignment
/// generation is reproducible from the recorded seed.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased uniform draw in [0, bound) via rejection sampling.
    uint64_t below(uint64_t bound) {
        if (bound <= 1) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double prob) { return unit() < prob; }

    uint64_t state() const { return state_; }

  private:
    uint64_t state_;
};

/// Seeded Fisher-Yates permutation.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (size_t i = items.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace coinami::crypto
