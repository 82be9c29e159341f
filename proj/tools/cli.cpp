#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptq/errors.hpp"
#include "ptq/perturbation.hpp"
#include "ptq/published.hpp"
#include "ptq/serialize.hpp"
#include "ptq/summation.hpp"

namespace ptq::cli {

namespace {

using nlohmann::json;

constexpr int default_full_g_cap = 8;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int output_precision()
{
    if (const char* env = std::getenv("PTQ_PRECISION")) {
        const int value = std::atoi(env);
        if (value >= 1 && value <= 17) {
            return value;
        }
    }
    return 17;
}

json number_or_null(const std::optional<double>& v)
{
    if (!v || !std::isfinite(*v)) {
        return nullptr;
    }
    return *v;
}

json params_json(const EvalParams& p)
{
    return {{"g", p.g}, {"lambda", p.lambda}, {"mu", p.mu}, {"epsilon", p.epsilon}, {"hbar", p.hbar}};
}

void add_param_flags(CLI::App& cmd, EvalParams& params)
{
    cmd.add_option("--g", params.g, "cubic coupling g")->capture_default_str();
    cmd.add_option("--lambda", params.lambda, "quartic coupling lambda (>= 0)")->capture_default_str();
    cmd.add_option("--mu", params.mu, "oscillator frequency mu (> 0)")->capture_default_str();
    cmd.add_option("--epsilon", params.epsilon, "bookkeeping parameter epsilon (> 0)")->capture_default_str();
    cmd.add_option("--hbar", params.hbar, "Planck constant hbar (> 0)")->capture_default_str();
}

// ---------------------------------------------------------------- derive

struct DeriveOptions {
    int order = 0;
    std::string mode = "first-order-g";
    std::string format = "text";
    bool no_order_cap = false;
};

int run_derive(const DeriveOptions& opt, std::ostream& out)
{
    const GMode mode = parse_gmode(opt.mode);
    if (opt.order < 0) {
        throw UsageError("--order must be >= 0");
    }
    if (mode == GMode::full && opt.order > default_full_g_cap && !opt.no_order_cap) {
        throw UsageError("full-g derivation is capped at order " + std::to_string(default_full_g_cap) +
                         "; pass --no-order-cap to override");
    }
    const QSeries series = compute_q(opt.order, mode, HamiltonianSpec::standard());
    if (opt.format == "json") {
        out << to_json(series).dump(2) << "\n";
    } else if (opt.format == "latex") {
        out << to_latex(series);
    } else if (opt.format == "text") {
        out << to_text(series);
    } else {
        throw UsageError("derive supports --format text, json or latex");
    }
    return exit_ok;
}

// ---------------------------------------------------------------- verify

struct OrderCheck {
    int n = 0;
    std::vector<published::CoefficientDiff> diffs;
};

struct EvenCheck {
    int m = 0;
    GMode mode = GMode::full;
    PhasePolynomial residual;
};

struct Reconciliation {
    std::string label;
    GMode mode = GMode::full;
    std::vector<published::CoefficientDiff> diffs;
};

std::vector<EvenCheck> even_checks(int max_m)
{
    std::vector<EvenCheck> out;
    if (max_m < 1) {
        return out;
    }
    const auto spec = HamiltonianSpec::standard();
    for (GMode mode : {GMode::first_order, GMode::full}) {
        // The eps^(2m) coefficient needs Q_1 ... Q_{2m-1}.
        const QSeries series = compute_q(max_m - 1, mode, spec);
        for (int m = 1; m <= max_m; ++m) {
            out.push_back({m, mode, verify_even_order(m, series, spec)});
        }
    }
    return out;
}

json even_json(const std::vector<EvenCheck>& checks)
{
    auto arr = json::array();
    for (const auto& c : checks) {
        arr.push_back({{"m", c.m},
                       {"mode", std::string(to_string(c.mode))},
                       {"status", c.residual.is_zero() ? "pass" : "fail"},
                       {"residual", to_json(c.residual)}});
    }
    return arr;
}

void even_text(const std::vector<EvenCheck>& checks, std::ostream& out)
{
    for (const auto& c : checks) {
        out << "  m=" << c.m << "  eps^" << 2 * c.m << "  " << to_string(c.mode) << "  ";
        if (c.residual.is_zero()) {
            out << "PASS (residual identically zero)\n";
        } else {
            out << "FAIL residual " << to_text(c.residual) << "\n";
        }
    }
}

struct VerifyOptions {
    int max_n = 12;
    std::string format = "text";
    std::string inject_fault;
};

FactorialFn pick_factorial(const std::string& fault)
{
    if (fault.empty()) {
        return factorial;
    }
    if (fault == "factorial") {
        return [](unsigned long n) -> mpz_class {
            mpz_class f = factorial(n);
            return n == 5 ? mpz_class(f + 1) : f;
        };
    }
    throw UsageError("unknown fault '" + fault + "' (supported: factorial)");
}

json order_diffs_json(const std::vector<published::CoefficientDiff>& diffs)
{
    auto arr = json::array();
    for (const auto& d : diffs) {
        arr.push_back({{"monomial", d.mono.to_string()},
                       {"closed_form", d.printed.to_string()},
                       {"recurrence", d.computed.to_string()}});
    }
    return arr;
}

int run_verify_closed_form(const VerifyOptions& opt, std::ostream& out)
{
    if (opt.max_n < 0) {
        throw UsageError("--max-n must be >= 0");
    }
    const auto spec = HamiltonianSpec::standard();
    const FactorialFn fact = pick_factorial(opt.inject_fault);
    const QSeries recurrence = compute_q(std::max(opt.max_n, 4), GMode::first_order, spec);

    std::vector<OrderCheck> orders;
    for (int n = 0; n <= opt.max_n; ++n) {
        orders.push_back({n, published::diff(closed_form_term(n, fact), recurrence.term(static_cast<std::size_t>(n)))});
    }
    const auto evens = even_checks(std::min(opt.max_n, 4));

    const QSeries full = compute_q(2, GMode::full, spec);
    std::vector<Reconciliation> recon{
        {"Q_1", GMode::full, published::diff(published::q1(), full.term(0))},
        {"Q_3", GMode::full, published::diff(published::q3_full(), full.term(1))},
        {"Q_5", GMode::full, published::diff(published::q5_full(), full.term(2))},
        {"Q_7", GMode::first_order, published::diff(published::q7_first_order(), recurrence.term(3))},
        {"Q_9", GMode::first_order, published::diff(published::q9_first_order(), recurrence.term(4))},
    };

    const bool orders_ok = std::all_of(orders.begin(), orders.end(), [](const auto& o) { return o.diffs.empty(); });
    const bool evens_ok = std::all_of(evens.begin(), evens.end(), [](const auto& e) { return e.residual.is_zero(); });
    const bool pass = orders_ok && evens_ok;

    if (opt.format == "json") {
        auto jorders = json::array();
        for (const auto& o : orders) {
            jorders.push_back({{"n", o.n},
                               {"order", 2 * o.n + 1},
                               {"status", o.diffs.empty() ? "pass" : "fail"},
                               {"diffs", order_diffs_json(o.diffs)}});
        }
        auto jrecon = json::array();
        for (const auto& r : recon) {
            jrecon.push_back({{"label", r.label},
                              {"mode", std::string(to_string(r.mode))},
                              {"discrepancies", published::to_json(r.diffs)}});
        }
        const json report{{"command", "verify-closed-form"},
                          {"max_n", opt.max_n},
                          {"orders", jorders},
                          {"even_orders", even_json(evens)},
                          {"reconciliation", jrecon},
                          {"result", pass ? "pass" : "fail"}};
        out << report.dump(2) << "\n";
    } else if (opt.format == "text") {
        out << "closed form vs first-order-g recurrence, n = 0.." << opt.max_n << "\n";
        for (const auto& o : orders) {
            out << "  n=" << o.n << "  Q_" << 2 * o.n + 1 << "  ";
            if (o.diffs.empty()) {
                out << "PASS\n";
            } else {
                const auto& d = o.diffs.front();
                out << "FAIL first differing monomial " << d.mono.to_string() << ": closed form "
                    << d.printed.to_string() << ", recurrence " << d.computed.to_string() << "\n";
            }
        }
        out << "even-order residuals, m = 1.." << std::min(opt.max_n, 4) << "\n";
        even_text(evens, out);
        out << "reconciliation with printed generators (informational)\n";
        for (const auto& r : recon) {
            out << " " << r.label << " (" << to_string(r.mode) << "):\n" << published::to_text(r.diffs);
        }
        out << "RESULT: " << (pass ? "PASS" : "FAIL") << " (" << orders.size() << " orders checked)\n";
    } else {
        throw UsageError("verify-closed-form supports --format text or json");
    }
    return pass ? exit_ok : exit_verification_failed;
}

struct EvenOptions {
    int max_order = 4;
    std::string format = "text";
};

int run_verify_even_orders(const EvenOptions& opt, std::ostream& out)
{
    if (opt.max_order < 1) {
        throw UsageError("--max-order must be >= 1");
    }
    const auto checks = even_checks(opt.max_order);
    const bool pass = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.residual.is_zero(); });
    if (opt.format == "json") {
        const json report{{"command", "verify-even-orders"},
                          {"max_order", opt.max_order},
                          {"even_orders", even_json(checks)},
                          {"result", pass ? "pass" : "fail"}};
        out << report.dump(2) << "\n";
    } else if (opt.format == "text") {
        out << "even-order residuals, m = 1.." << opt.max_order << "\n";
        even_text(checks, out);
        out << "RESULT: " << (pass ? "PASS" : "FAIL") << "\n";
    } else {
        throw UsageError("verify-even-orders supports --format text or json");
    }
    return pass ? exit_ok : exit_verification_failed;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
    EvalParams params;
    PhasePoint point;
    int terms = 50;
    std::string format = "text";
    bool strict = false;
};

int run_eval(const EvalOptions& opt, std::ostream& out)
{
    if (opt.terms < 0) {
        throw UsageError("--terms must be >= 0");
    }
    const double margin = convergence_margin(opt.params, opt.point);
    const PartialSum ps = partial_sum(opt.params, opt.point, opt.terms);
    std::optional<double> q;
    try {
        q = q_closed(opt.params, opt.point);
    } catch (const OutsideRegionError&) {
    }
    const bool diverged = !q.has_value();
    std::optional<double> abs_err;
    std::optional<double> rel_err;
    if (q) {
        abs_err = std::abs(ps.value - *q);
        rel_err = std::abs(*q) > 1e-12 ? *abs_err / std::abs(*q) : *abs_err;
    }
    const char* flag = diverged ? "diverged" : "converged";

    if (opt.format == "json") {
        const json report{{"command", "eval"},
                          {"params", params_json(opt.params)},
                          {"point", {{"x", opt.point.x}, {"p", opt.point.p}}},
                          {"terms", opt.terms},
                          {"q_closed", number_or_null(q)},
                          {"partial_sum", ps.value},
                          {"last_increment", ps.last_increment},
                          {"increment_ratio", ps.increment_ratio()},
                          {"abs_err", number_or_null(abs_err)},
                          {"rel_err", number_or_null(rel_err)},
                          {"margin", number_or_null(margin)},
                          {"flag", flag}};
        out << report.dump(2) << "\n";
    } else if (opt.format == "text") {
        auto show = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("n/a"); };
        out << "q_closed        = " << show(q) << "\n"
            << "partial_sum     = " << format_number(ps.value) << "  (N = " << opt.terms << ")\n"
            << "last_increment  = " << format_number(ps.last_increment) << "\n"
            << "increment_ratio = " << format_number(ps.increment_ratio()) << "\n"
            << "abs_err         = " << show(abs_err) << "\n"
            << "rel_err         = " << show(rel_err) << "\n"
            << "margin          = " << format_number(margin) << "\n"
            << "flag            = " << flag << "\n";
    } else {
        throw UsageError("eval supports --format text or json");
    }
    return diverged && opt.strict ? exit_verification_failed : exit_ok;
}

// ---------------------------------------------------------------- region / sweep

struct RegionOptions {
    EvalParams params;
    std::vector<double> xs;
    GridAxis axis{-2.0, 2.0, 41};
};

int run_region(const RegionOptions& opt, std::ostream& out)
{
    if (opt.params.lambda == 0.0) {
        throw UsageError("region: lambda = 0 has no finite convergence boundary (the series converges everywhere)");
    }
    std::vector<double> xs = opt.xs;
    if (xs.empty()) {
        validate(opt.axis, "x");
        for (int i = 0; i < opt.axis.samples; ++i) {
            xs.push_back(opt.axis.at(i));
        }
    }
    out << "x,p_bound\n";
    for (double x : xs) {
        out << format_number(x) << "," << format_number(region_bound(opt.params, x)) << "\n";
    }
    return exit_ok;
}

struct SweepOptions {
    EvalParams params;
    GridAxis x_axis{-2.0, 2.0, 41};
    GridAxis p_axis{-1.5, 1.5, 41};
    int terms = 50;
};

int run_sweep(const SweepOptions& opt, std::ostream& out)
{
    const auto rows = phase_sweep(opt.params, opt.x_axis, opt.p_axis, opt.terms);
    out << "x,p,margin,q_closed,partial_sum_N,abs_err,flag\n";
    for (const auto& r : rows) {
        out << format_number(r.x) << "," << format_number(r.p) << "," << format_number(r.margin) << ","
            << format_number(r.q_closed.value_or(NAN)) << "," << format_number(r.partial_sum) << ","
            << format_number(r.abs_err.value_or(NAN)) << "," << (r.diverged ? "diverged" : "converged") << "\n";
    }
    return exit_ok;
}

} // namespace

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", output_precision(), value);
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Semiclassical C-operator generator for H = p^2/2 + mu^2 x^2/2 + i eps g x^3 - eps^2 lam x^4"};
    app.require_subcommand(1);
    std::string output_path;
    app.add_option("-o,--output", output_path, "write results to this file instead of standard output");

    DeriveOptions derive;
    auto* cmd_derive = app.add_subcommand("derive", "derive Q_1 ... Q_{2n+1} exactly");
    cmd_derive->add_option("--order", derive.order, "highest index n (derives Q_1 ... Q_{2n+1})")->capture_default_str();
    cmd_derive->add_option("--mode", derive.mode, "full-g or first-order-g")
        ->check(CLI::IsMember({"full-g", "first-order-g"}))
        ->capture_default_str();
    cmd_derive->add_option("--format", derive.format, "text, json or latex")
        ->check(CLI::IsMember({"text", "json", "latex"}))
        ->capture_default_str();
    cmd_derive->add_flag("--no-order-cap", derive.no_order_cap, "allow full-g orders above 8");

    VerifyOptions verify;
    auto* cmd_verify = app.add_subcommand("verify-closed-form", "check the closed-form general term against the recurrence");
    cmd_verify->add_option("--max-n", verify.max_n, "highest index n checked")->capture_default_str();
    cmd_verify->add_option("--format", verify.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    cmd_verify->add_option("--inject-fault", verify.inject_fault, "negative control: 'factorial' perturbs 5!");

    EvenOptions even;
    auto* cmd_even = app.add_subcommand("verify-even-orders", "check that even eps orders vanish identically");
    cmd_even->add_option("--max-order", even.max_order, "highest m checked (coefficient of eps^(2m))")
        ->capture_default_str();
    cmd_even->add_option("--format", even.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    EvalOptions eval;
    auto* cmd_eval = app.add_subcommand("eval", "compare the summed closed form with partial sums at a point");
    add_param_flags(*cmd_eval, eval.params);
    cmd_eval->add_option("--x", eval.point.x, "phase-space x")->capture_default_str();
    cmd_eval->add_option("--p", eval.point.p, "phase-space p")->capture_default_str();
    cmd_eval->add_option("--terms", eval.terms, "highest index N of the partial sum")->capture_default_str();
    cmd_eval->add_option("--format", eval.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    cmd_eval->add_flag("--strict", eval.strict, "exit with code 1 outside the convergence region");

    RegionOptions region;
    auto* cmd_region = app.add_subcommand("region", "sample the convergence boundary p_bound(x)");
    add_param_flags(*cmd_region, region.params);
    cmd_region->add_option("--x", region.xs, "explicit x values (repeatable)");
    cmd_region->add_option("--x-min", region.axis.min)->capture_default_str();
    cmd_region->add_option("--x-max", region.axis.max)->capture_default_str();
    cmd_region->add_option("--samples", region.axis.samples)->capture_default_str();

    SweepOptions sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "error map of partial sums against the closed form");
    add_param_flags(*cmd_sweep, sweep.params);
    cmd_sweep->add_option("--x-min", sweep.x_axis.min)->capture_default_str();
    cmd_sweep->add_option("--x-max", sweep.x_axis.max)->capture_default_str();
    cmd_sweep->add_option("--nx", sweep.x_axis.samples)->capture_default_str();
    cmd_sweep->add_option("--p-min", sweep.p_axis.min)->capture_default_str();
    cmd_sweep->add_option("--p-max", sweep.p_axis.max)->capture_default_str();
    cmd_sweep->add_option("--np", sweep.p_axis.samples)->capture_default_str();
    cmd_sweep->add_option("--terms", sweep.terms, "highest index N of the partial sums")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    std::ostringstream buffer;
    int code = exit_ok;
    try {
        if (cmd_eval->parsed()) {
            validate(eval.params);
        } else if (cmd_region->parsed()) {
            validate(region.params);
        } else if (cmd_sweep->parsed()) {
            validate(sweep.params);
        }

        if (cmd_derive->parsed()) {
            code = run_derive(derive, buffer);
        } else if (cmd_verify->parsed()) {
            code = run_verify_closed_form(verify, buffer);
        } else if (cmd_even->parsed()) {
            code = run_verify_even_orders(even, buffer);
        } else if (cmd_eval->parsed()) {
            code = run_eval(eval, buffer);
        } else if (cmd_region->parsed()) {
            code = run_region(region, buffer);
        } else if (cmd_sweep->parsed()) {
            code = run_sweep(sweep, buffer);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }

    if (output_path.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(output_path, std::ios::binary);
        file << buffer.str();
        if (!file) {
            err << "error: cannot write " << output_path << "\n";
            return exit_internal;
        }
    }
    return code;
}

} // namespace ptq::cli
