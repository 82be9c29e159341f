#include "ptq/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace ptq::kernels {

#if defined(__AVX2__) && defined(__FMA__)

bool avx2_compiled() noexcept { return true; }

void partial_sums_avx2(const SeriesCoefficients& coeffs, std::span<const double> xs, std::span<const double> ps,
                       std::span<double> values, std::span<double> last_increment)
{
    constexpr std::size_t lanes = 4;
    const int terms = coeffs.terms();
    const std::size_t powers = static_cast<std::size_t>(terms) + 2;
    // Power tables, lane-interleaved: entry j of lane l at j * lanes + l.
    std::vector<double> xpow(powers * lanes);
    std::vector<double> ppow(powers * lanes);
    const __m256d sign_mask = _mm256_set1_pd(-0.0);

    const std::size_t full = xs.size() - xs.size() % lanes;
    for (std::size_t i = 0; i < full; i += lanes) {
        const __m256d x = _mm256_loadu_pd(xs.data() + i);
        const __m256d p = _mm256_loadu_pd(ps.data() + i);
        const __m256d xx = _mm256_mul_pd(x, x);
        const __m256d pp = _mm256_mul_pd(p, p);
        __m256d xj = _mm256_set1_pd(1.0);
        __m256d pj = xj;
        for (std::size_t j = 0; j < powers; ++j) {
            _mm256_storeu_pd(xpow.data() + j * lanes, xj);
            _mm256_storeu_pd(ppow.data() + j * lanes, pj);
            xj = _mm256_mul_pd(xj, xx);
            pj = _mm256_mul_pd(pj, pp);
        }
        __m256d sum = _mm256_setzero_pd();
        __m256d inc = _mm256_setzero_pd();
        for (int n = 0; n <= terms; ++n) {
            const auto row = coeffs.row(n);
            inc = _mm256_setzero_pd();
            for (int k = 0; k <= n + 1; ++k) {
                const __m256d c = _mm256_set1_pd(row[static_cast<std::size_t>(k)]);
                const __m256d mono =
                    _mm256_mul_pd(_mm256_loadu_pd(xpow.data() + static_cast<std::size_t>(k) * lanes),
                                  _mm256_loadu_pd(ppow.data() + static_cast<std::size_t>(n + 1 - k) * lanes));
                inc = _mm256_fmadd_pd(c, mono, inc);
            }
            inc = _mm256_mul_pd(inc, p);
            sum = _mm256_add_pd(sum, inc);
        }
        _mm256_storeu_pd(values.data() + i, sum);
        _mm256_storeu_pd(last_increment.data() + i, _mm256_andnot_pd(sign_mask, inc));
    }
    if (full < xs.size()) {
        partial_sums_scalar(coeffs, xs.subspan(full), ps.subspan(full), values.subspan(full),
                            last_increment.subspan(full));
    }
}

#else

bool avx2_compiled() noexcept { return false; }

void partial_sums_avx2(const SeriesCoefficients& coeffs, std::span<const double> xs, std::span<const double> ps,
                       std::span<double> values, std::span<double> last_increment)
{
    partial_sums_scalar(coeffs, xs, ps, values, last_increment);
}

#endif

} // namespace ptq::kernels
