#pragma once

#include <optional>
#include <vector>

#include "ptq/params.hpp"
#include "ptq/phase_polynomial.hpp"

namespace ptq {

/// Summation variables alpha = mu^2 x^2 / (2 p^2), beta = 8 eps^2 lam p^2 / mu^4.
struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Throws DomainError for p == 0.
AlphaBeta alpha_beta(const EvalParams& params, const PhasePoint& point);

/// mu^2 / (2 eps sqrt(2 lam)) - eps sqrt(2 lam) x^2 - |p|. Positive iff
/// alpha beta + sqrt(beta) < 1. +infinity for lam == 0.
double convergence_margin(const EvalParams& params, const PhasePoint& point);

/// Upper edge p_bound(x) of the convergence parabola. Throws DomainError for lam == 0.
double region_bound(const EvalParams& params, double x);

/// Closed form of
///   alpha sum_k (alpha beta)^k / (k+1)! sum_n (2n+k+1)! / (2n+1)! beta^n
/// = [ln((1 - ab + sqrt b)/(1 - ab - sqrt b)) - ln((1 + sqrt b)/(1 - sqrt b))] / (2 b^(3/2)).
/// Requires alpha, beta >= 0 and alpha beta + sqrt(beta) < 1.
double inner_sum_closed(const AlphaBeta& ab);

/// sum_n beta^n / (2n + 3) = (atanh(sqrt b) - sqrt b) / b^(3/2) for 0 <= beta < 1.
double outer_sum_closed(double beta);

/// True when outer_sum_closed is evaluated within 1e-3 of its singularity at beta = 1.
bool near_divergent(double beta);

/// Below this value of t = sqrt(beta) / (1 - alpha beta) the closed forms are
/// evaluated from their power series in t^2 (60 terms) instead of the logarithms.
inline constexpr double series_switch_t = 0.5;
inline constexpr int series_terms = 60;

/// Summed first-order-in-g generator
///   Q = g mu^2 sqrt2 / (16 eps^2 lam^(3/2) hbar) ln((D - s)/(D + s)) + g p / (2 eps lam hbar),
/// D = mu^2 - 4 lam eps^2 x^2, s = 2 eps sqrt(2 lam) p. Zero at p = 0. Small lam
/// (including lam == 0) goes through the series in t^2 whose leading term is eps Q_1.
/// Throws OutsideRegionError when a logarithm argument is not positive.
double q_closed(const EvalParams& params, const PhasePoint& point);

/// Closed-form generators Q_1 ... Q_{2N+1}, built once and shared read-only.
class ClosedFormTable {
public:
    explicit ClosedFormTable(int max_n);

    int max_n() const noexcept { return static_cast<int>(terms_.size()) - 1; }
    const PhasePolynomial& term(int n) const { return terms_.at(static_cast<std::size_t>(n)); }

private:
    std::vector<PhasePolynomial> terms_;
};

struct PartialSum {
    double value = 0.0;
    /// |eps^(2N+1) Q_{2N+1}| at the point.
    double last_increment = 0.0;
    /// |eps^(2N-1) Q_{2N-1}|; zero for N == 0.
    double previous_increment = 0.0;

    /// Ratio of the last two increments (a value >= 1 signals divergence).
    double increment_ratio() const { return previous_increment == 0.0 ? 0.0 : last_increment / previous_increment; }
};

/// sum_{n=0}^{N} eps^(2n+1) Q_{2n+1}(x, p) with the closed-form terms.
PartialSum partial_sum(const EvalParams& params, const PhasePoint& point, int terms);
PartialSum partial_sum(const ClosedFormTable& table, const EvalParams& params, const PhasePoint& point, int terms);

struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    int samples = 2;

    double at(int i) const;
};

/// Validates finite bounds and samples >= 2.
void validate(const GridAxis& axis, const char* name);

struct SweepRow {
    double x = 0.0;
    double p = 0.0;
    double margin = 0.0;
    std::optional<double> q_closed;
    double partial_sum = 0.0;
    std::optional<double> abs_err;
    bool diverged = false;
};

/// Error map over an x-major grid: rows ordered by x index, then p index.
std::vector<SweepRow> phase_sweep(const EvalParams& params, const GridAxis& x_axis, const GridAxis& p_axis, int terms);

} // namespace ptq
