#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace epinet {

// Deterministic random utilities.
//
// The raw bit stream comes from std::mt19937_64, whose output sequence is
// fixed by the C++ standard and therefore identical on every platform. The
// standard-library distributions are *not* fixed, so the mappings from raw
// bits to uniforms, integers, normals and shuffles are pinned here:
//
//   uniform_double : (bits >> 11) * 2^-53                      -> [0, 1)
//   uniform_below  : high 64 bits of the 128-bit product bits*n -> [0, n)
//   normal         : Box-Muller on two uniforms, cosine deviate first
//   shuffle        : Fisher-Yates from the back using uniform_below
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be nonzero.
    std::uint64_t uniform_below(std::uint64_t n) {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((u128(next_u64()) * u128(n)) >> 64);
    }

    double normal();

    bool bernoulli(double p) { return uniform_double() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Derives an independent per-purpose seed from one master seed:
/// splitmix64(master XOR fnv1a64(purpose)). Every random stream in the
/// pipeline (split, weight init, epoch shuffles, dropout, permutations)
/// is seeded this way from the single run seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t splitmix64(std::uint64_t x);

} // namespace epinet
