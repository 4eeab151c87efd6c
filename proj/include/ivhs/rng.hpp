#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace ivhs {

// Seeded RNG. mt19937_64 output is fully specified by the standard; the
// bounded draw below avoids uniform_int_distribution, whose mapping is
// implementation-defined, so streams reproduce across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return eng_(); }

    // unbiased draw in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    // child stream for a named task; a pure function of (seed, label), so it
    // does not depend on how many draws the parent has made
    Rng derive(const std::string& label) const {
        std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
        for (unsigned char c : label) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= seed_ + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return Rng(h);
    }

    Rng derive(std::uint64_t index) const { return derive("idx:" + std::to_string(index)); }

  private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace ivhs
