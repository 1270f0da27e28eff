#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "e2oc/common/rng.hpp"
#include "e2oc/kernels/kernels.hpp"

namespace k = e2oc::kernels;

namespace {

std::vector<double> random_cols(e2oc::Rng& r, std::size_t n, std::size_t m, bool ties) {
    std::vector<double> c(n * m);
    for (auto& v : c) v = ties ? static_cast<double>(r.below(4)) : r.uniform(-3.0, 3.0);
    return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
    e2oc::Rng r(17);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u}) {
        for (std::size_t m : {2u, 3u, 5u}) {
            auto cols = random_cols(r, n, m, n % 2 == 1);
            std::vector<double> q(m);
            for (auto& v : q) v = r.uniform(-3.0, 3.0);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                double d = 0.0;
                for (std::size_t j = 0; j < m; ++j) d += (cols[j * n + i] - q[j]) * (cols[j * n + i] - q[j]);
                best = std::min(best, d);
            }
            const double got = k::scalar::min_sq_distance(cols.data(), n, m, q.data());
            if (n == 0)
                CHECK(std::isinf(got));
            else
                CHECK(got == doctest::Approx(best));

            std::vector<std::uint8_t> pd(n), db(n);
            std::vector<double> p(m);
            for (auto& v : p) v = static_cast<double>(r.below(4));
            k::scalar::dominance_row(cols.data(), n, m, p.data(), pd.data(), db.data());
            for (std::size_t i = 0; i < n; ++i) {
                bool le = true, lt = false, ge = true, gt = false;
                for (std::size_t j = 0; j < m; ++j) {
                    double x = cols[j * n + i];
                    le = le && p[j] <= x;
                    lt = lt || p[j] < x;
                    ge = ge && x <= p[j];
                    gt = gt || x < p[j];
                }
                CHECK(bool(pd[i]) == (le && lt));
                CHECK(bool(db[i]) == (ge && gt));
            }
        }
    }
}

#if E2OC_HAVE_AVX2_KERNELS
TEST_CASE("avx2 kernels are bitwise identical to scalar") {
    if (k::detected_isa() != k::Isa::avx2) {
        MESSAGE("AVX2 not available on this CPU, equivalence test skipped");
        return;
    }
    e2oc::Rng r(99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = r.below(40), m = 2 + r.below(4);
        auto cols = random_cols(r, n, m, trial % 3 == 0);
        std::vector<double> q(m);
        for (auto& v : q) v = trial % 3 == 0 ? static_cast<double>(r.below(4)) : r.uniform(-3.0, 3.0);

        CHECK(same_bits(k::scalar::min_sq_distance(cols.data(), n, m, q.data()),
                        k::avx2::min_sq_distance(cols.data(), n, m, q.data())));

        std::vector<std::uint8_t> a1(n), b1(n), a2(n), b2(n);
        k::scalar::dominance_row(cols.data(), n, m, q.data(), a1.data(), b1.data());
        k::avx2::dominance_row(cols.data(), n, m, q.data(), a2.data(), b2.data());
        CHECK(a1 == a2);
        CHECK(b1 == b2);

        std::vector<double> xs(n), ys(n), o1(n), o2(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = r.uniform();
            ys[i] = r.uniform();
        }
        k::scalar::distance_row(xs.data(), ys.data(), n, q[0], q[1], o1.data());
        k::avx2::distance_row(xs.data(), ys.data(), n, q[0], q[1], o2.data());
        for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(o1[i], o2[i]));
    }
}
#endif

TEST_CASE("dispatch reports an isa") {
    auto name = k::isa_name(k::active_isa());
    CHECK((name == "scalar" || name == "avx2"));
    CHECK(std::isinf(k::min_sq_distance(nullptr, 0, 2, nullptr)));
}
