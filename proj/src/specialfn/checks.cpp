#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "clustertet/error.hpp"
#include "clustertet/seed.hpp"
#include "clustertet/specialfn.hpp"

namespace clustertet {
namespace {

const double kPi = std::acos(-1.0);
const cplx kI(0.0, 1.0);

// Tolerances of the suites.
constexpr double kTolIdentity = 1e-8;
constexpr double kTolSelfDual = 1e-7;
constexpr double kTolContinuation = 1e-7;
constexpr double kTolFaddeev = 1e-6;
constexpr double kTolPsiRatio = 1e-6;
constexpr double kTolPsiShift = 1e-10;

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string fmt(cplx z)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

// Distance scaled by max(1, |rhs|): absolute for values of modest size and
// relative for large ones.
double scaled_err(cplx lhs, cplx rhs) { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }

CheckRow make_row(std::string check, std::vector<std::pair<std::string, std::string>> params, cplx lhs, cplx rhs,
                  double tol)
{
    CheckRow row;
    row.check = std::move(check);
    row.params = std::move(params);
    row.lhs = lhs;
    row.rhs = rhs;
    row.abs_err = scaled_err(lhs, rhs);
    row.tolerance = tol;
    row.pass = row.abs_err < tol;
    return row;
}

std::vector<double> hbar_grid(const SuiteOptions& opts)
{
    if (opts.b) return {*opts.b * *opts.b};
    return {0.3, 1.0, 2.5};
}

QuadratureConfig without_reflection(QuadratureConfig cfg)
{
    cfg.use_reflection = false;
    return cfg;
}

// Both z and z + shift are kept inside the quadrature region, so no
// difference-equation continuation enters either side.
std::vector<CheckRow> difference_suite(const SuiteOptions& opts, const QuadratureConfig& cfg)
{
    std::vector<CheckRow> rows;
    Rng rng(opts.rng_seed);
    for (double hbar : hbar_grid(opts)) {
        const cplx tau(hbar, 0.0);
        const double bound = 0.8 * strip_half_width(tau);
        const cplx q = std::exp(kPi * kI * tau);
        const cplx q_dual = std::exp(kPi * kI / tau);
        for (int which = 0; which < 2; ++which) {
            const double shift_im = which == 0 ? 2.0 * kPi * hbar : 2.0 * kPi;
            if (bound - shift_im <= -bound)
                throw Error(ErrorCode::DomainViolation, "shift exceeds the quadrature strip at ħ = " + fmt(hbar));
            for (std::size_t s = 0; s < opts.samples; ++s) {
                const cplx z(rng.uniform(-2.0, 2.0), rng.uniform(-bound, bound - shift_im));
                const cplx lhs = phi_quadrature(z + kI * shift_im, tau, cfg);
                const cplx mult = which == 0 ? 1.0 + q * std::exp(z) : 1.0 + q_dual * std::exp(z / tau);
                const cplx rhs = mult * phi_quadrature(z, tau, cfg);
                rows.push_back(make_row(which == 0 ? "difference-tau" : "difference-1",
                                        {{"hbar", fmt(hbar)}, {"z", fmt(z)}}, lhs, rhs, kTolIdentity));
            }
        }
    }
    return rows;
}

std::vector<CheckRow> unitarity_suite(const SuiteOptions& opts, const QuadratureConfig& cfg)
{
    std::vector<CheckRow> rows;
    Rng rng(opts.rng_seed);
    for (double hbar : hbar_grid(opts)) {
        for (std::size_t s = 0; s < opts.samples; ++s) {
            const double x = rng.uniform(-3.0, 3.0);
            const cplx value = phi_quadrature(x, cplx(hbar, 0.0), cfg);
            rows.push_back(
                make_row("unitarity", {{"hbar", fmt(hbar)}, {"x", fmt(x)}}, std::abs(value), 1.0, kTolIdentity));
        }
    }
    return rows;
}

std::vector<CheckRow> inversion_suite(const SuiteOptions& opts, const QuadratureConfig& cfg)
{
    std::vector<CheckRow> rows;
    const double b = opts.b.value_or(1.1);
    const PlanckParams p = PlanckParams::from_b(b);
    const QuadratureConfig c = without_reflection(cfg);

    const cplx tau(p.hbar, 0.0);
    rows.push_back(make_row("phi-at-zero", {{"b", fmt(b)}}, phi_quadrature(0.0, tau, c), phi_at_zero(tau),
                            kTolIdentity));
    rows.push_back(make_row("double-sine-at-zero", {{"b", fmt(b)}}, double_sine(0.0, p, c), 1.0, kTolIdentity));

    Rng rng(opts.rng_seed);
    for (std::size_t s = 0; s < opts.samples;) {
        const cplx z(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        if (std::abs(z) > 2.0) continue;
        ++s;
        const cplx lhs = double_sine(z, p, c) * double_sine(-z, p, c);
        rows.push_back(make_row("inversion", {{"b", fmt(b)}, {"z", fmt(z)}}, lhs, 1.0, kTolIdentity));
    }

    const PlanckParams dual = PlanckParams::from_b(1.0 / b);
    const cplx z(0.3, 0.0);
    rows.push_back(make_row("self-duality", {{"b", fmt(b)}, {"z", fmt(z)}}, double_sine(z, p, c),
                            double_sine(z, dual, c), kTolSelfDual));
    return rows;
}

std::vector<CheckRow> faddeev_suite(const SuiteOptions& opts, const QuadratureConfig& cfg)
{
    struct Point {
        double b;
        cplx u, w;
    };
    std::vector<Point> points = {
        {1.0, {0.05, 0.3}, {-0.2, -0.1}},
        {1.2, {0.1, 0.4}, {-0.15, -0.2}},
        {0.9, {-0.1, 0.25}, {-0.1, -0.3}},
    };
    if (opts.b)
        for (auto& pt : points) pt.b = *opts.b;
    // The integrand reaches large Re z, where phi needs the reflection
    // relation; the identity under test is the integral formula itself.
    std::vector<CheckRow> rows;
    for (const auto& pt : points) {
        const PlanckParams p = PlanckParams::from_b(pt.b);
        rows.push_back(make_row("faddeev", {{"b", fmt(pt.b)}, {"u", fmt(pt.u)}, {"w", fmt(pt.w)}},
                                faddeev_integral(pt.u, pt.w, p, cfg), faddeev_rhs(pt.u, pt.w, p, cfg), kTolFaddeev));
    }
    return rows;
}

std::vector<CheckRow> psi_ratio_suite(const SuiteOptions&, const QuadratureConfig& cfg)
{
    std::vector<CheckRow> rows;
    {
        const cplx q = 0.3, x = 0.2;
        const std::size_t terms = 200;
        rows.push_back(make_row("psi-shift", {{"q", fmt(q)}, {"x", fmt(x)}, {"terms", "200"}},
                                psi_truncated(q * q * x, q, terms) / psi_truncated(x, q, terms), 1.0 + q * x,
                                kTolPsiShift));
    }
    const cplx tau(0.4, 0.6);
    const cplx q = std::exp(kPi * kI * tau);
    const cplx q_dual_inv = std::exp(-kPi * kI / tau);
    for (const cplx z : {cplx(0.1, 0.0), cplx(-0.3, 0.2)}) {
        const std::size_t terms = 400;
        const cplx rhs = psi_truncated(std::exp(z), q, terms) / psi_truncated(std::exp(z / tau), q_dual_inv, terms);
        rows.push_back(make_row("psi-ratio", {{"tau", fmt(tau)}, {"z", fmt(z)}, {"terms", "400"}},
                                phi_quadrature(z, tau, cfg), rhs, kTolPsiRatio));
    }
    return rows;
}

// Direct quadrature between 0.8 and 0.95 of the strip against the
// continued value, and direct quadrature against the reflection relation.
std::vector<CheckRow> continuation_suite(const SuiteOptions& opts, const QuadratureConfig& cfg)
{
    std::vector<CheckRow> rows;
    Rng rng(opts.rng_seed);
    for (double hbar : hbar_grid(opts)) {
        const cplx tau(hbar, 0.0);
        const double width = strip_half_width(tau);
        const std::size_t n = std::max<std::size_t>(1, opts.samples / 4);
        for (std::size_t s = 0; s < n; ++s) {
            const double sign = s % 2 == 0 ? 1.0 : -1.0;
            const cplx z(rng.uniform(-1.0, 1.0), sign * rng.uniform(0.82, 0.95) * width);
            rows.push_back(make_row("continuation", {{"hbar", fmt(hbar)}, {"z", fmt(z)}},
                                    phi_quadrature(z, tau, cfg), phi_tau(z, tau, without_reflection(cfg)),
                                    kTolContinuation));
        }
        const double delta = default_contour_offset(tau);
        for (std::size_t s = 0; s < n; ++s) {
            const cplx z(rng.uniform(8.0, 9.5) / delta, rng.uniform(-0.5, 0.5));
            QuadratureConfig with = cfg;
            with.use_reflection = true;
            rows.push_back(make_row("reflection", {{"hbar", fmt(hbar)}, {"z", fmt(z)}}, phi_quadrature(z, tau, cfg),
                                    phi_tau(z, tau, with), kTolContinuation));
        }
    }
    return rows;
}

}  // namespace

const std::vector<std::string>& check_suite_names()
{
    static const std::vector<std::string> names = {"difference", "unitarity",   "inversion",
                                                   "faddeev",    "psi-ratio", "continuation"};
    return names;
}

std::vector<CheckRow> run_check_suite(const std::string& name, const SuiteOptions& opts, const QuadratureConfig& cfg)
{
    if (opts.b && !(*opts.b > 0.0)) throw Error(ErrorCode::DomainViolation, "b must be positive");
    if (opts.samples == 0) throw Error(ErrorCode::DomainViolation, "samples must be at least 1");
    const QuadratureConfig c = without_reflection(cfg);
    if (name == "difference") return difference_suite(opts, c);
    if (name == "unitarity") return unitarity_suite(opts, c);
    if (name == "inversion") return inversion_suite(opts, c);
    if (name == "faddeev") return faddeev_suite(opts, cfg);
    if (name == "psi-ratio") return psi_ratio_suite(opts, c);
    if (name == "continuation") return continuation_suite(opts, c);
    throw Error(ErrorCode::ParseError, "unknown check suite '" + name + "'");
}

}  // namespace clustertet
