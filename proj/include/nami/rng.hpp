#pragma once

#include <cstdint>

namespace nami {

/// splitmix64 generator. The standard distributions are
/// implementation-defined, and seeds must reproduce bit-identical output
/// across toolchains, so all library randomness goes through this.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    int below(int bound) { return static_cast<int>(next() % static_cast<std::uint64_t>(bound)); }

    /// uniform in (0, 1), 53-bit resolution, never exactly zero
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    bool coin(double p) { return uniform01() < p; }

private:
    std::uint64_t state_;
};

}  // namespace nami
