#include <doctest.h>

#include <random>
#include <vector>

#include "ptq/kernels.hpp"
#include "ptq/summation.hpp"
#include "test_support.hpp"

using namespace ptq;
using ptq::testing::rel_diff;

namespace {

struct Batch {
    std::vector<double> xs;
    std::vector<double> ps;
};

Batch random_batch(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    std::uniform_real_distribution<double> up(-1.5, 1.5);
    Batch b;
    for (std::size_t i = 0; i < n; ++i) {
        b.xs.push_back(ux(rng));
        b.ps.push_back(up(rng));
    }
    return b;
}

} // namespace

TEST_CASE("scalar kernel matches the polynomial evaluation")
{
    const EvalParams params{0.2, 0.05, 1.3, 0.8, 0.7};
    const ClosedFormTable table(30);
    const SeriesCoefficients coeffs(table, params, 30);
    std::mt19937_64 rng(51);
    const auto batch = random_batch(rng, 64);
    std::vector<double> values(64);
    std::vector<double> last(64);
    kernels::partial_sums_scalar(coeffs, batch.xs, batch.ps, values, last);
    for (std::size_t i = 0; i < 64; ++i) {
        const auto ref = partial_sum(table, params, {batch.xs[i], batch.ps[i]}, 30);
        CHECK(rel_diff(values[i], ref.value) < 1e-12);
        CHECK(rel_diff(last[i], ref.last_increment) < 1e-12);
    }
}

TEST_CASE("AVX2 kernel is equivalent to the scalar reference")
{
    if (detect_isa() != KernelIsa::avx2) {
        MESSAGE("AVX2 not available on this machine; only the scalar kernel is exercised");
        return;
    }
    const EvalParams params{};
    const ClosedFormTable table(50);
    std::mt19937_64 rng(53);
    for (int terms : {0, 1, 7, 50}) {
        const SeriesCoefficients coeffs(table, params, terms);
        // Sizes cover the vector body and every remainder length.
        for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 100u}) {
            const auto batch = random_batch(rng, n);
            std::vector<double> sv(n), sl(n), vv(n), vl(n);
            kernels::partial_sums_scalar(coeffs, batch.xs, batch.ps, sv, sl);
            kernels::partial_sums_avx2(coeffs, batch.xs, batch.ps, vv, vl);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(rel_diff(vv[i], sv[i]) < 1e-12);
                CHECK(rel_diff(vl[i], sl[i]) < 1e-12);
            }
        }
    }
}

TEST_CASE("dispatch")
{
    CHECK((to_string(KernelIsa::scalar) == "scalar"));
    if (!kernels::avx2_compiled()) {
        CHECK(detect_isa() == KernelIsa::scalar);
    }
    const ClosedFormTable table(5);
    const SeriesCoefficients coeffs(table, EvalParams{}, 5);
    CHECK(coeffs.row(3).size() == 5);
    std::vector<double> xs{0.1, 0.2}, ps{0.3, 0.4}, a(2), b(2), c(2), d(2);
    partial_sums(detect_isa(), coeffs, xs, ps, a, b);
    partial_sums(KernelIsa::scalar, coeffs, xs, ps, c, d);
    CHECK(rel_diff(a[0], c[0]) < 1e-12);
    CHECK(rel_diff(a[1], c[1]) < 1e-12);
}
