#pragma once

// Data-parallel inner loops shared by the metric and problem code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected once at runtime. The variants perform the same IEEE
// operations in the same order per lane, so results are bitwise identical;
// tests/unit/test_kernels.cpp checks that on random inputs.
//
// Point sets are passed column-major: coordinate j of point i is at
// cols[j * n + i].

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace e2oc::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best ISA supported by this CPU and build.
Isa detected_isa() noexcept;

/// ISA used by the dispatching entry points. Defaults to detected_isa(); the
/// E2OC_FORCE_SCALAR environment variable pins it to scalar.
Isa active_isa() noexcept;

/// Minimum squared Euclidean distance from `query` (m values) to the n points.
/// Returns +inf when n == 0.
double min_sq_distance(const double* cols, std::size_t n, std::size_t m, const double* query) noexcept;

/// For every point i: p_dominates[i] = (p dominates i), dominated_by[i] = (i dominates p).
/// Minimization, strict Pareto dominance.
void dominance_row(const double* cols, std::size_t n, std::size_t m, const double* p,
                   std::uint8_t* p_dominates, std::uint8_t* dominated_by) noexcept;

/// out[i] = sqrt((xs[i] - x0)^2 + (ys[i] - y0)^2).
void distance_row(const double* xs, const double* ys, std::size_t n, double x0, double y0,
                  double* out) noexcept;

namespace scalar {
double min_sq_distance(const double* cols, std::size_t n, std::size_t m, const double* query) noexcept;
void dominance_row(const double* cols, std::size_t n, std::size_t m, const double* p,
                   std::uint8_t* p_dominates, std::uint8_t* dominated_by) noexcept;
void distance_row(const double* xs, const double* ys, std::size_t n, double x0, double y0,
                  double* out) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define E2OC_HAVE_AVX2_KERNELS 1
namespace avx2 {
double min_sq_distance(const double* cols, std::size_t n, std::size_t m, const double* query) noexcept;
void dominance_row(const double* cols, std::size_t n, std::size_t m, const double* p,
                   std::uint8_t* p_dominates, std::uint8_t* dominated_by) noexcept;
void distance_row(const double* xs, const double* ys, std::size_t n, double x0, double y0,
                  double* out) noexcept;
}  // namespace avx2
#else
#define E2OC_HAVE_AVX2_KERNELS 0
#endif

}  // namespace e2oc::kernels
