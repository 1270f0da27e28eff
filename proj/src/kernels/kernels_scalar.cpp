#include <cmath>
#include <cstdlib>
#include <limits>

#include "e2oc/kernels/kernels.hpp"

namespace e2oc::kernels {

namespace scalar {

double min_sq_distance(const double* cols, std::size_t n, std::size_t m, const double* query) noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double t = cols[j * n + i] - query[j];
            d = d + t * t;
        }
        best = d < best ? d : best;
    }
    return best;
}

void dominance_row(const double* cols, std::size_t n, std::size_t m, const double* p,
                   std::uint8_t* p_dominates, std::uint8_t* dominated_by) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        bool p_le = true, p_lt = false, q_le = true, q_lt = false;
        for (std::size_t j = 0; j < m; ++j) {
            const double a = p[j];
            const double b = cols[j * n + i];
            p_le = p_le && (a <= b);
            p_lt = p_lt || (a < b);
            q_le = q_le && (b <= a);
            q_lt = q_lt || (b < a);
        }
        p_dominates[i] = static_cast<std::uint8_t>(p_le && p_lt);
        dominated_by[i] = static_cast<std::uint8_t>(q_le && q_lt);
    }
}

void distance_row(const double* xs, const double* ys, std::size_t n, double x0, double y0,
                  double* out) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - x0;
        const double dy = ys[i] - y0;
        out[i] = std::sqrt(dx * dx + dy * dy);
    }
}

}  // namespace scalar

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    }
    return "unknown";
}

Isa detected_isa() noexcept {
#if E2OC_HAVE_AVX2_KERNELS
    static const Isa isa = __builtin_cpu_supports("avx2") ? Isa::avx2 : Isa::scalar;
    return isa;
#else
    return Isa::scalar;
#endif
}

Isa active_isa() noexcept {
    static const Isa isa = [] {
        const char* force = std::getenv("E2OC_FORCE_SCALAR");
        if (force && *force && *force != '0') return Isa::scalar;
        return detected_isa();
    }();
    return isa;
}

double min_sq_distance(const double* cols, std::size_t n, std::size_t m, const double* query) noexcept {
#if E2OC_HAVE_AVX2_KERNELS
    if (active_isa() == Isa::avx2) return avx2::min_sq_distance(cols, n, m, query);
#endif
    return scalar::min_sq_distance(cols, n, m, query);
}

void dominance_row(const double* cols, std::size_t n, std::size_t m, const double* p,
                   std::uint8_t* p_dominates, std::uint8_t* dominated_by) noexcept {
#if E2OC_HAVE_AVX2_KERNELS
    if (active_isa() == Isa::avx2) return avx2::dominance_row(cols, n, m, p, p_dominates, dominated_by);
#endif
    scalar::dominance_row(cols, n, m, p, p_dominates, dominated_by);
}

void distance_row(const double* xs, const double* ys, std::size_t n, double x0, double y0,
                  double* out) noexcept {
#if E2OC_HAVE_AVX2_KERNELS
    if (active_isa() == Isa::avx2) return avx2::distance_row(xs, ys, n, x0, y0, out);
#endif
    scalar::distance_row(xs, ys, n, x0, y0, out);
}

}  // namespace e2oc::kernels
