#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ptq/params.hpp"

namespace ptq {

class ClosedFormTable;

/// Double-precision coefficients of the closed-form partial sum at fixed
/// parameters: increment n is p * sum_k c[n][k] X^k P^(n+1-k) with X = x^2,
/// P = p^2, and c already carrying eps^(2n+1) and the parameter powers.
class SeriesCoefficients {
public:
    SeriesCoefficients(const ClosedFormTable& table, const EvalParams& params, int terms);

    int terms() const noexcept { return terms_; }
    /// Row n holds n + 2 entries, k = 0 ... n + 1.
    std::span<const double> row(int n) const
    {
        return {data_.data() + offsets_[static_cast<std::size_t>(n)], static_cast<std::size_t>(n + 2)};
    }

private:
    int terms_;
    std::vector<double> data_;
    std::vector<std::size_t> offsets_;
};

enum class KernelIsa { scalar, avx2 };

std::string_view to_string(KernelIsa isa);

/// Widest variant supported by the running CPU.
KernelIsa detect_isa();

/// Partial sums sum_{n<=N} at many points. values[i] receives the sum and
/// last_increment[i] the magnitude of the final term.
void partial_sums(KernelIsa isa, const SeriesCoefficients& coeffs, std::span<const double> xs,
                  std::span<const double> ps, std::span<double> values, std::span<double> last_increment);

namespace kernels {

void partial_sums_scalar(const SeriesCoefficients& coeffs, std::span<const double> xs, std::span<const double> ps,
                         std::span<double> values, std::span<double> last_increment);

/// Only callable when detect_isa() reports avx2.
void partial_sums_avx2(const SeriesCoefficients& coeffs, std::span<const double> xs, std::span<const double> ps,
                       std::span<double> values, std::span<double> last_increment);

bool avx2_compiled() noexcept;

} // namespace kernels

} // namespace ptq
