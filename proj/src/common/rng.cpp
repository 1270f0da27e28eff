#include "e2oc/common/rng.hpp"

#include <algorithm>

namespace e2oc {

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (auto p : parts) h = combine_seed(h, p);
    return h;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) {
    return derive_seed({base, fnv1a64(label), index});
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
    if (n <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::pair<std::size_t, std::size_t> Rng::distinct_pair(std::size_t n) noexcept {
    const auto a = static_cast<std::size_t>(below(n));
    auto b = static_cast<std::size_t>(below(n - 1));
    if (b >= a) ++b;
    return {a, b};
}

std::vector<double> random_simplex_weights(std::size_t m, Rng& rng) {
    std::vector<double> cuts(m + 1);
    cuts[0] = 0.0;
    cuts[m] = 1.0;
    for (std::size_t i = 1; i < m; ++i) cuts[i] = rng.uniform();
    std::sort(cuts.begin() + 1, cuts.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = cuts[i + 1] - cuts[i];
    return w;
}

}  // namespace e2oc
