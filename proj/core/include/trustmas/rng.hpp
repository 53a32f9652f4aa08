#ifndef TRUSTMAS_RNG_HPP
#define TRUSTMAS_RNG_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace trustmas {

/// Deterministic splitmix64 stream. We do not use <random> engines or
/// distributions here: their sequences are implementation-defined and the
/// trace contract is byte-identical replay.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n). Always consumes exactly one draw.
    std::uint64_t bounded(std::uint64_t n) {
        // 128-bit multiply-shift; bias is negligible for simulation purposes
        // and the draw count stays roster-independent.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [0, hi].
    double uniform_to(double hi) { return uniform() * hi; }

private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Independent named stream for one (actor, purpose) pair. Adding or removing
/// other actors never perturbs an existing stream's sequence.
inline Rng rng_stream(std::uint64_t scenario_seed, std::string_view actor,
                      std::string_view purpose) {
    std::uint64_t h = scenario_seed;
    h ^= fnv1a(actor) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= fnv1a(purpose) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return Rng(h);
}

} // namespace trustmas

#endif
