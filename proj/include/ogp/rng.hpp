#ifndef OGP_RNG_HPP
#define OGP_RNG_HPP

#include <cstdint>
#include <limits>

namespace ogp {

/// SplitMix64 finalizer. Good avalanche, used as the block function of the counter RNG.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (mix64(b) + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

constexpr std::uint64_t hash_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return hash_combine(hash_combine(a, b), c);
}

/// Maps 64 random bits to a double in [0,1).
constexpr double bits_to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/**
 * Counter-based random stream.
 *
 * The i-th output is mix64(key + i * golden), so a stream is fully determined by its
 * key and position. Child streams are derived by hashing the parent key with a tag,
 * which gives the hierarchical seeding (master -> module -> trial -> site) used across
 * the library: results never depend on the order in which trials are scheduled.
 *
 * Satisfies UniformRandomBitGenerator, so the std distributions accept it.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0)
        : key_(hash_combine(seed, stream)), ctr_(0) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * (++ctr_)); }

    /// Uniform in [0,1).
    double uniform() { return bits_to_unit((*this)()); }

    /// Uniform in (0,1]; safe to take the logarithm of.
    double uniform_pos() { return 1.0 - uniform(); }

    /// Uniform integer in [0, k). Unbiased via rejection.
    std::uint64_t below(std::uint64_t k) {
        if (k <= 1) return 0;
        const std::uint64_t limit = max() - max() % k;
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return x % k;
    }

    /// Independent child stream identified by `tag`.
    Rng split(std::uint64_t tag) const { return Rng(key_, tag + 1); }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

/// Stateless uniform keyed by (seed, a, b, tag): the lazy per-pair randomness of trajectories.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t tag) {
    return bits_to_unit(mix64(hash_combine(hash_key(seed, a, b), tag)));
}

}  // namespace ogp

#endif
