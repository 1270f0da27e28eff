// Compiled with -mavx2 (see src/CMakeLists.txt); only reached after a runtime
// CPU check. No FMA: the scalar reference does separate multiply and add.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "e2oc/kernels/kernels.hpp"

namespace e2oc::kernels::avx2 {

double min_sq_distance(const double* cols, std::size_t n, std::size_t m, const double* query) noexcept {
    double best = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vbest = _mm256_set1_pd(best);
        for (; i + 4 <= n; i += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t j = 0; j < m; ++j) {
                const __m256d x = _mm256_loadu_pd(cols + j * n + i);
                const __m256d t = _mm256_sub_pd(x, _mm256_set1_pd(query[j]));
                acc = _mm256_add_pd(acc, _mm256_mul_pd(t, t));
            }
            vbest = _mm256_min_pd(vbest, acc);
        }
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, vbest);
        for (double v : lanes) best = v < best ? v : best;
    }
    for (; i < n; ++i) {
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
    std::size_t i = 0;
    const __m256d all = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    for (; i + 4 <= n; i += 4) {
        __m256d p_le = all, p_lt = _mm256_setzero_pd();
        __m256d q_le = all, q_lt = _mm256_setzero_pd();
        for (std::size_t j = 0; j < m; ++j) {
            const __m256d a = _mm256_set1_pd(p[j]);
            const __m256d b = _mm256_loadu_pd(cols + j * n + i);
            p_le = _mm256_and_pd(p_le, _mm256_cmp_pd(a, b, _CMP_LE_OQ));
            p_lt = _mm256_or_pd(p_lt, _mm256_cmp_pd(a, b, _CMP_LT_OQ));
            q_le = _mm256_and_pd(q_le, _mm256_cmp_pd(b, a, _CMP_LE_OQ));
            q_lt = _mm256_or_pd(q_lt, _mm256_cmp_pd(b, a, _CMP_LT_OQ));
        }
        const int pd = _mm256_movemask_pd(_mm256_and_pd(p_le, p_lt));
        const int qd = _mm256_movemask_pd(_mm256_and_pd(q_le, q_lt));
        for (int k = 0; k < 4; ++k) {
            p_dominates[i + k] = static_cast<std::uint8_t>((pd >> k) & 1);
            dominated_by[i + k] = static_cast<std::uint8_t>((qd >> k) & 1);
        }
    }
    for (; i < n; ++i) {
        bool a_le = true, a_lt = false, b_le = true, b_lt = false;
        for (std::size_t j = 0; j < m; ++j) {
            const double a = p[j];
            const double b = cols[j * n + i];
            a_le = a_le && (a <= b);
            a_lt = a_lt || (a < b);
            b_le = b_le && (b <= a);
            b_lt = b_lt || (b < a);
        }
        p_dominates[i] = static_cast<std::uint8_t>(a_le && a_lt);
        dominated_by[i] = static_cast<std::uint8_t>(b_le && b_lt);
    }
}

void distance_row(const double* xs, const double* ys, std::size_t n, double x0, double y0,
                  double* out) noexcept {
    std::size_t i = 0;
    const __m256d vx = _mm256_set1_pd(x0);
    const __m256d vy = _mm256_set1_pd(y0);
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vy);
        const __m256d s = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - x0;
        const double dy = ys[i] - y0;
        out[i] = std::sqrt(dx * dx + dy * dy);
    }
}

}  // namespace e2oc::kernels::avx2
