#include "ptq/summation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ptq/errors.hpp"
#include "ptq/kernels.hpp"
#include "ptq/perturbation.hpp"

namespace ptq {

AlphaBeta alpha_beta(const EvalParams& params, const PhasePoint& point)
{
    validate(params);
    if (point.p == 0.0) {
        throw DomainError("alpha is singular at p = 0");
    }
    const double mu2 = params.mu * params.mu;
    return {mu2 * point.x * point.x / (2.0 * point.p * point.p),
            8.0 * params.epsilon * params.epsilon * params.lambda * point.p * point.p / (mu2 * mu2)};
}

double convergence_margin(const EvalParams& params, const PhasePoint& point)
{
    validate(params);
    if (params.lambda == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double c = params.epsilon * std::sqrt(2.0 * params.lambda);
    return params.mu * params.mu / (2.0 * c) - c * point.x * point.x - std::abs(point.p);
}

double region_bound(const EvalParams& params, double x)
{
    validate(params);
    if (params.lambda == 0.0) {
        throw DomainError("no finite convergence boundary for lambda = 0");
    }
    const double c = params.epsilon * std::sqrt(2.0 * params.lambda);
    return params.mu * params.mu / (2.0 * c) - c * x * x;
}

double outer_sum_closed(double beta)
{
    if (!(beta >= 0.0) || !(beta < 1.0)) {
        throw DomainError("outer sum requires 0 <= beta < 1, got " + std::to_string(beta));
    }
    if (beta < series_switch_t * series_switch_t) {
        double sum = 0.0;
        for (int n = series_terms - 1; n >= 0; --n) {
            sum = sum * beta + 1.0 / (2.0 * n + 3.0);
        }
        return sum;
    }
    const double u = std::sqrt(beta);
    return (std::atanh(u) - u) / (beta * u);
}

bool near_divergent(double beta) { return beta < 1.0 && 1.0 - beta < 1e-3; }

double inner_sum_closed(const AlphaBeta& ab)
{
    const double alpha = ab.alpha;
    const double beta = ab.beta;
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !(alpha * beta + std::sqrt(beta) < 1.0)) {
        throw DomainError("inner sum requires alpha, beta >= 0 and alpha beta + sqrt(beta) < 1");
    }
    if (beta == 0.0) {
        return alpha;
    }
    const double ab_prod = alpha * beta;
    const double w = 1.0 - ab_prod;
    const double u = std::sqrt(beta);
    const double t = u / w;
    if (t < series_switch_t) {
        // atanh(t) - atanh(u) expanded in odd powers; the j-th term is
        // beta^(j-1) (w^-(2j+1) - 1) / (2j+1), the j = 0 term is alpha / w.
        const double log_w = std::log1p(-ab_prod);
        double sum = 0.0;
        double beta_pow = 1.0;
        for (int j = 1; j < series_terms; ++j) {
            sum += beta_pow * std::expm1(-(2.0 * j + 1.0) * log_w) / (2.0 * j + 1.0);
            beta_pow *= beta;
        }
        return alpha / w + sum;
    }
    // ln((w+u)/(w-u)) - ln((1+u)/(1-u)) = 2 [atanh(t) - atanh(u)]
    //   = 2 atanh((t - u) / (1 - t u)) = 2 atanh(alpha beta u / (w - beta)).
    return std::atanh(ab_prod * u / (w - beta)) / (beta * u);
}

double q_closed(const EvalParams& params, const PhasePoint& point)
{
    validate(params);
    const double eps = params.epsilon;
    const double lam = params.lambda;
    const double mu2 = params.mu * params.mu;
    const double x = point.x;
    const double p = point.p;

    const double d = mu2 - 4.0 * lam * eps * eps * x * x;
    const double s = 2.0 * eps * std::sqrt(2.0 * lam) * p;
    if (!(d - s > 0.0) || !(d + s > 0.0)) {
        throw OutsideRegionError("point (" + std::to_string(x) + ", " + std::to_string(p) +
                                     ") lies outside the convergence region",
                                 convergence_margin(params, point));
    }
    if (p == 0.0) {
        return 0.0;
    }
    const double pref = -4.0 * eps * params.g / (mu2 * mu2 * params.hbar);
    const double t = s / d;
    if (std::abs(t) < series_switch_t) {
        // Q = pref [ mu^2 x^2 p / (2 w) + p^3 / w^3 sum_i t^(2i) / (2i + 3) ],  w = D / mu^2.
        const double w = d / mu2;
        return pref * (mu2 * x * x * p / (2.0 * w) + p * p * p / (w * w * w) * outer_sum_closed(t * t));
    }
    const double log_ratio = std::log1p(-2.0 * s / (d + s));
    const double k = params.g * mu2 * std::sqrt(2.0) / (16.0 * eps * eps * lam * std::sqrt(lam) * params.hbar);
    return k * log_ratio + params.g * p / (2.0 * eps * lam * params.hbar);
}

ClosedFormTable::ClosedFormTable(int max_n)
{
    if (max_n < 0) {
        throw ArgumentError("closed-form table size must be >= 0");
    }
    terms_.reserve(static_cast<std::size_t>(max_n) + 1);
    for (int n = 0; n <= max_n; ++n) {
        terms_.push_back(closed_form_term(n));
    }
}

PartialSum partial_sum(const EvalParams& params, const PhasePoint& point, int terms)
{
    if (terms < 0) {
        throw ArgumentError("number of terms must be >= 0");
    }
    return partial_sum(ClosedFormTable(terms), params, point, terms);
}

PartialSum partial_sum(const ClosedFormTable& table, const EvalParams& params, const PhasePoint& point, int terms)
{
    validate(params);
    if (terms < 0 || terms > table.max_n()) {
        throw ArgumentError("number of terms outside the closed-form table");
    }
    PartialSum out;
    for (int n = 0; n <= terms; ++n) {
        double inc = 0.0;
        for (const auto& t : table.term(n).terms()) {
            const Monomial& m = t.mono;
            const PowerFactor factors[] = {{params.epsilon, 2 * n + 1}, {point.x, m.x},   {point.p, m.p},
                                           {params.g, m.g},             {params.lambda, m.lam}, {params.mu, m.mu},
                                           {params.hbar, m.hbar}};
            inc += scaled_product(t.coeff.re(), factors);
        }
        out.value += inc;
        out.previous_increment = out.last_increment;
        out.last_increment = std::abs(inc);
    }
    if (terms == 0) {
        out.previous_increment = 0.0;
    }
    return out;
}

double GridAxis::at(int i) const
{
    if (i == samples - 1) {
        return max;
    }
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(samples - 1);
}

void validate(const GridAxis& axis, const char* name)
{
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) {
        throw ArgumentError(std::string(name) + " grid bounds must be finite");
    }
    if (axis.samples < 2) {
        throw ArgumentError(std::string(name) + " grid needs at least 2 samples");
    }
}

std::vector<SweepRow> phase_sweep(const EvalParams& params, const GridAxis& x_axis, const GridAxis& p_axis, int terms)
{
    validate(params);
    validate(x_axis, "x");
    validate(p_axis, "p");
    if (terms < 0) {
        throw ArgumentError("number of terms must be >= 0");
    }
    const std::size_t count = static_cast<std::size_t>(x_axis.samples) * static_cast<std::size_t>(p_axis.samples);
    std::vector<double> xs(count);
    std::vector<double> ps(count);
    for (int i = 0; i < x_axis.samples; ++i) {
        for (int j = 0; j < p_axis.samples; ++j) {
            const auto idx = static_cast<std::size_t>(i) * static_cast<std::size_t>(p_axis.samples) +
                             static_cast<std::size_t>(j);
            xs[idx] = x_axis.at(i);
            ps[idx] = p_axis.at(j);
        }
    }
    const ClosedFormTable table(terms);
    const SeriesCoefficients coeffs(table, params, terms);
    std::vector<double> sums(count);
    std::vector<double> last(count);
    partial_sums(detect_isa(), coeffs, xs, ps, sums, last);

    std::vector<SweepRow> rows(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        SweepRow& row = rows[idx];
        row.x = xs[idx];
        row.p = ps[idx];
        row.margin = convergence_margin(params, {row.x, row.p});
        row.partial_sum = sums[idx];
        row.diverged = !(row.margin > 0.0);
        if (!row.diverged) {
            try {
                row.q_closed = q_closed(params, {row.x, row.p});
                row.abs_err = std::abs(*row.q_closed - row.partial_sum);
            } catch (const OutsideRegionError&) {
                // margin rounded positive while a log argument rounded to <= 0
                row.diverged = true;
            }
        }
    }
    return rows;
}

} // namespace ptq
