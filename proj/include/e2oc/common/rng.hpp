#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace e2oc {

/// Name and version of the generator, persisted in instance metadata.
inline constexpr std::string_view kRngName = "splitmix64-ctr/v1";

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a over bytes; stable across platforms (used for prompt digests and ids).
constexpr std::uint64_t fnv1a64(std::string_view s,
                                std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Order-sensitive combination of words into one seed.
constexpr std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) noexcept {
    return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);
std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index = 0);

/// Counter-based generator: output i is mix64(key + (i + 1) * golden). Any
/// stream position is reproducible from (key, counter) alone, and the output
/// sequence is identical on every platform. Distributions are implemented here
/// rather than through <random> because the standard distributions are not
/// specified bit-exactly.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept : key_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept { return next(); }

    std::uint64_t next() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) noexcept;

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Two distinct indices in [0, n), n >= 2.
    std::pair<std::size_t, std::size_t> distinct_pair(std::size_t n) noexcept;

    template <class T>
    void shuffle(std::span<T> v) noexcept {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }
    template <class T>
    void shuffle(std::vector<T>& v) noexcept { shuffle(std::span<T>(v)); }

    /// Independent child stream.
    Rng split() noexcept { return Rng(mix64(next() ^ 0x5851f42d4c957f2dULL)); }

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Random point on the probability simplex (uniform, via sorted spacings).
std::vector<double> random_simplex_weights(std::size_t m, Rng& rng);

}  // namespace e2oc
