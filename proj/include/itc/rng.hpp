#pragma once

#include <cstdint>

namespace itc {

// Deterministic pseudo-random stream (splitmix64 core). All randomness in
// the library flows through this type so that a (seed, call-order) pair
// reproduces bit-identical values on every platform; std:: distributions
// are implementation-defined and would break that guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; one value per call, pair cached.
    double normal();

    // Derive an independent child stream.
    Rng fork(std::uint64_t stream) const {
        Rng child(state_ ^ (0x632be59bd9b4e019ULL * (stream + 1)));
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace itc
