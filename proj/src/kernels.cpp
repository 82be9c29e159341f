#include "ptq/kernels.hpp"

#include <cmath>

#include "ptq/errors.hpp"
#include "ptq/summation.hpp"

namespace ptq {

SeriesCoefficients::SeriesCoefficients(const ClosedFormTable& table, const EvalParams& params, int terms)
    : terms_(terms)
{
    validate(params);
    if (terms < 0 || terms > table.max_n()) {
        throw ArgumentError("number of terms outside the closed-form table");
    }
    for (int n = 0; n <= terms; ++n) {
        offsets_.push_back(data_.size());
        data_.resize(data_.size() + static_cast<std::size_t>(n) + 2, 0.0);
        double* row = data_.data() + offsets_.back();
        for (const auto& t : table.term(n).terms()) {
            const Monomial& m = t.mono;
            const int k = m.x / 2;
            if (m.x % 2 != 0 || m.p != 2 * n + 3 - 2 * k || k > n + 1) {
                throw ArgumentError("closed-form term has unexpected monomial " + m.to_string());
            }
            const PowerFactor factors[] = {{params.epsilon, 2 * n + 1}, {params.g, m.g}, {params.lambda, m.lam},
                                           {params.mu, m.mu},           {params.hbar, m.hbar}};
            row[k] = scaled_product(t.coeff.re(), factors);
        }
    }
}

std::string_view to_string(KernelIsa isa) { return isa == KernelIsa::avx2 ? "avx2" : "scalar"; }

KernelIsa detect_isa()
{
#if defined(__x86_64__) || defined(__i386__)
    if (kernels::avx2_compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return KernelIsa::avx2;
    }
#endif
    return KernelIsa::scalar;
}

void partial_sums(KernelIsa isa, const SeriesCoefficients& coeffs, std::span<const double> xs,
                  std::span<const double> ps, std::span<double> values, std::span<double> last_increment)
{
    if (xs.size() != ps.size() || values.size() != xs.size() || last_increment.size() != xs.size()) {
        throw ArgumentError("partial_sums: mismatched span lengths");
    }
    if (isa == KernelIsa::avx2) {
        kernels::partial_sums_avx2(coeffs, xs, ps, values, last_increment);
    } else {
        kernels::partial_sums_scalar(coeffs, xs, ps, values, last_increment);
    }
}

namespace kernels {

void partial_sums_scalar(const SeriesCoefficients& coeffs, std::span<const double> xs, std::span<const double> ps,
                         std::span<double> values, std::span<double> last_increment)
{
    const int terms = coeffs.terms();
    std::vector<double> xpow(static_cast<std::size_t>(terms) + 2);
    std::vector<double> ppow(static_cast<std::size_t>(terms) + 2);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double xx = xs[i] * xs[i];
        const double pp = ps[i] * ps[i];
        xpow[0] = 1.0;
        ppow[0] = 1.0;
        for (std::size_t j = 1; j < xpow.size(); ++j) {
            xpow[j] = xpow[j - 1] * xx;
            ppow[j] = ppow[j - 1] * pp;
        }
        double sum = 0.0;
        double inc = 0.0;
        for (int n = 0; n <= terms; ++n) {
            const auto row = coeffs.row(n);
            inc = 0.0;
            for (int k = 0; k <= n + 1; ++k) {
                inc += row[static_cast<std::size_t>(k)] *
                       (xpow[static_cast<std::size_t>(k)] * ppow[static_cast<std::size_t>(n + 1 - k)]);
            }
            inc *= ps[i];
            sum += inc;
        }
        values[i] = sum;
        last_increment[i] = std::abs(inc);
    }
}

} // namespace kernels

} // namespace ptq
