#include "clustertet/specialfn.hpp"

#include <cmath>
#include <string>

#include "clustertet/error.hpp"

namespace clustertet {
namespace {

const double kPi = std::acos(-1.0);
const cplx kI(0.0, 1.0);

// e^x - 1 without cancellation for small |x|.
cplx expm1c(cplx x)
{
    const double a = x.real(), b = x.imag();
    const double em1 = std::expm1(a);
    const double s = std::sin(0.5 * b);
    return {em1 * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

void validate_tau(cplx tau)
{
    if (!(tau.real() > 0.0) || tau.imag() < 0.0 || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
        throw Error(ErrorCode::DomainViolation, "Φ^τ requires Re τ > 0 and Im τ ≥ 0");
}

void validate_finite(cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorCode::DomainViolation, "argument must be finite");
}

double contour_offset(cplx tau, const QuadratureConfig& cfg)
{
    const double limit = std::min(1.0, tau.real() / std::norm(tau));
    if (cfg.contour_offset == 0.0) return 0.5 * limit;
    if (!(cfg.contour_offset > 0.0) || !(cfg.contour_offset < limit))
        throw Error(ErrorCode::DomainViolation, "contour offset must lie in (0, " + std::to_string(limit) + ")");
    return cfg.contour_offset;
}

// Multiplier c with Φ(z + shift) = (1 + c(z)) Φ(z) for the shift chosen by
// continuation_shift.
struct Shift {
    cplx step;
    bool by_tau;
};

Shift continuation_shift(cplx tau)
{
    if (tau.real() <= 1.0) return {2.0 * kPi * kI * tau, true};
    return {2.0 * kPi * kI, false};
}

cplx shift_multiplier(cplx z, cplx tau, const Shift& s)
{
    if (s.by_tau) return 1.0 + std::exp(kPi * kI * tau + z);
    return 1.0 + std::exp(kPi * kI / tau + z / tau);
}

}  // namespace

PlanckParams PlanckParams::from_b(double b)
{
    if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorCode::DomainViolation, "b must be a positive real");
    PlanckParams p;
    p.b = b;
    p.hbar = b * b;
    p.q = std::exp(kPi * kI * p.hbar);
    p.q_dual = std::exp(kPi * kI / p.hbar);
    p.Q = b + 1.0 / b;
    return p;
}

PlanckParams PlanckParams::from_hbar(double hbar)
{
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw Error(ErrorCode::DomainViolation, "ħ must be a positive real");
    return from_b(std::sqrt(hbar));
}

double default_contour_offset(cplx tau)
{
    validate_tau(tau);
    return 0.5 * std::min(1.0, tau.real() / std::norm(tau));
}

double strip_half_width(cplx tau) { return kPi * (1.0 + tau.real()); }

cplx phi_at_zero(cplx tau) { return std::exp(-kPi * kI * (tau + 1.0 / tau) / 24.0); }

cplx log_phi_quadrature(cplx z, cplx tau, const QuadratureConfig& cfg)
{
    validate_tau(tau);
    validate_finite(z);
    const double width = strip_half_width(tau);
    if (!(std::abs(z.imag()) < width))
        throw Error(ErrorCode::DomainViolation, "|Im z| must be below π(1 + Re τ) for the contour integral");
    const double delta = contour_offset(tau, cfg);

    // 1/sinh(x) = 2s e^{-sx} / (1 - e^{-2sx}) with s = sign(Re x) keeps every
    // exponential bounded on the contour.
    auto integrand = [&](double t) -> cplx {
        const cplx w(t, delta);
        const cplx x1 = kPi * w;
        const cplx x2 = kPi * tau * w;
        const double s1 = x1.real() >= 0.0 ? 1.0 : -1.0;
        const double s2 = x2.real() >= 0.0 ? 1.0 : -1.0;
        const cplx num = std::exp(-kI * w * z - s1 * x1 - s2 * x2);
        const cplx d1 = -expm1c(-2.0 * s1 * x1);
        const cplx d2 = -expm1c(-2.0 * s2 * x2);
        return 4.0 * s1 * s2 * num / (d1 * d2 * w);
    };

    double t_minus = cfg.truncation, t_plus = cfg.truncation;
    if (cfg.truncation == 0.0) {
        const double head = 41.5 + std::max(0.0, delta * z.real()) + kPi * tau.imag() * delta + std::log(4.0);
        t_plus = std::max(2.0, head / (width - z.imag()));
        t_minus = std::max(2.0, head / (width + z.imag()));
    } else if (!(cfg.truncation > 0.0)) {
        throw Error(ErrorCode::DomainViolation, "truncation must be positive");
    }
    // Rounding limits the absolute accuracy to a multiple of the integrand's
    // peak size e^{δ Re z}.
    const double tol = cfg.target_abs_err * std::max(1.0, std::exp(delta * z.real()));
    const QuadratureResult r = integrate_adaptive(integrand, -t_minus, t_plus, tol, cfg.max_nodes);
    return -0.25 * r.value;
}

cplx phi_quadrature(cplx z, cplx tau, const QuadratureConfig& cfg)
{
    return std::exp(log_phi_quadrature(z, tau, cfg));
}

cplx phi_tau(cplx z, cplx tau, const QuadratureConfig& cfg)
{
    validate_tau(tau);
    validate_finite(z);
    const double bound = 0.8 * strip_half_width(tau);
    const Shift s = continuation_shift(tau);
    if (std::abs(z.imag()) > 1e4 * bound) throw Error(ErrorCode::DomainViolation, "|Im z| too large to continue");

    cplx factor = 1.0;
    while (z.imag() > bound) {
        z -= s.step;
        factor *= shift_multiplier(z, tau, s);
    }
    while (z.imag() < -bound) {
        factor /= shift_multiplier(z, tau, s);
        z += s.step;
    }
    const double delta = contour_offset(tau, cfg);
    if (cfg.use_reflection && tau.imag() == 0.0 && delta * z.real() > 8.0) {
        const cplx phi0 = phi_at_zero(tau);
        return factor * phi0 * phi0 * std::exp(z * z / (4.0 * kPi * kI * tau)) / phi_quadrature(-z, tau, cfg);
    }
    return factor * phi_quadrature(z, tau, cfg);
}

cplx phi(cplx z, const PlanckParams& p, const QuadratureConfig& cfg) { return phi_tau(z, cplx(p.hbar, 0.0), cfg); }

cplx double_sine(cplx z, const PlanckParams& p, const QuadratureConfig& cfg)
{
    validate_finite(z);
    const cplx pre = std::exp(-kPi * kI * z * z / 2.0 + kPi * kI * (2.0 - p.Q * p.Q) / 24.0);
    return pre / phi(2.0 * kPi * p.b * z, p, cfg);
}

cplx psi_truncated(cplx x, cplx q, std::size_t terms)
{
    if (!(std::abs(q) < 1.0)) throw Error(ErrorCode::DivergentModulus, "Ψ^q requires |q| < 1");
    cplx prod = 1.0;
    cplx qk = q;
    const cplx q2 = q * q;
    for (std::size_t k = 1; k <= terms; ++k) {
        prod *= 1.0 + qk * x;
        qk *= q2;
    }
    return 1.0 / prod;
}

namespace {

template <class LogPhi>
cplx faddeev_core(cplx u, cplx w, const PlanckParams& p, const QuadratureConfig& cfg, LogPhi&& log_phi)
{
    validate_finite(u);
    validate_finite(w);
    if (!(-u.imag() + p.Q / 2.0 > 0.0))
        throw Error(ErrorCode::DomainViolation, "Faddeev integral requires Im(-u + iQ/2) > 0");
    if (!(-2.0 * u.imag() < w.imag() && w.imag() < 0.0))
        throw Error(ErrorCode::DomainViolation, "Faddeev integral requires Im(-2u) < Im w < 0");

    const double scale = 2.0 * kPi * p.b;
    auto integrand = [&](double x) -> cplx {
        return std::exp(log_phi(scale * (x - u)) - log_phi(scale * (x + u)) + 2.0 * kPi * kI * w * x);
    };
    // Decay rates of the integrand as x -> ±∞.
    const double r_plus = 2.0 * kPi * (2.0 * u.imag() + w.imag());
    const double r_minus = -2.0 * kPi * w.imag();
    auto cutoff = [](double r) { return (30.0 + std::max(0.0, -std::log(r))) / r; };
    const QuadratureResult r = integrate_adaptive(integrand, -cutoff(r_minus), cutoff(r_plus),
                                                  10.0 * cfg.target_abs_err, cfg.max_nodes, 32);
    return r.value;
}

// Chebyshev points of the second kind on [-1, 1], x_j = cos(jπ/n).
const std::array<double, PhiCache::kDegree + 1>& cheb_nodes()
{
    static const auto nodes = [] {
        std::array<double, PhiCache::kDegree + 1> x{};
        for (int j = 0; j <= PhiCache::kDegree; ++j) x[j] = std::cos(j * kPi / PhiCache::kDegree);
        return x;
    }();
    return nodes;
}

}  // namespace

cplx faddeev_integral(cplx u, cplx w, const PlanckParams& p, const QuadratureConfig& cfg)
{
    return faddeev_core(u, w, p, cfg, [&](cplx z) { return std::log(phi(z, p, cfg)); });
}

PhiCache::PhiCache(const PlanckParams& p, const QuadratureConfig& cfg)
    : p_(p), cfg_(cfg), tau_(p.hbar, 0.0), bound_(0.8 * strip_half_width(tau_))
{
}

cplx PhiCache::log_phi_direct(cplx z) const
{
    const double delta = contour_offset(tau_, cfg_);
    if (cfg_.use_reflection && delta * z.real() > 8.0) {
        const cplx log_phi0 = -kPi * kI * (tau_ + 1.0 / tau_) / 24.0;
        return 2.0 * log_phi0 + z * z / (4.0 * kPi * kI * tau_) - log_phi_quadrature(-z, tau_, cfg_);
    }
    return log_phi_quadrature(z, tau_, cfg_);
}

PhiCache::Line& PhiCache::line(double y)
{
    auto it = lines_.find(y);
    if (it != lines_.end()) return it->second;
    Line l;
    // Singularities of log Φ lie on |Im z| ≥ π(1 + ħ); a panel no wider than
    // its distance to them keeps the interpolation error near rounding.
    l.width = std::min(1.0, strip_half_width(tau_) - std::abs(y));
    return lines_.emplace(y, std::move(l)).first->second;
}

cplx PhiCache::log_phi(cplx z)
{
    validate_finite(z);
    if (std::abs(z.imag()) > bound_) return std::log(clustertet::phi(z, p_, cfg_));
    Line& l = line(z.imag());
    const double pos = z.real() / l.width;
    const long long index = static_cast<long long>(std::floor(pos));
    auto it = l.panels.find(index);
    if (it == l.panels.end()) {
        Panel values{};
        const double centre = (static_cast<double>(index) + 0.5) * l.width;
        for (int j = 0; j <= kDegree; ++j)
            values[j] = log_phi_direct(cplx(centre + 0.5 * l.width * cheb_nodes()[j], z.imag()));
        it = l.panels.emplace(index, values).first;
        ++panels_built_;
    }
    // Barycentric interpolation with weights (-1)^j, halved at the ends.
    const double s = 2.0 * (pos - static_cast<double>(index)) - 1.0;
    const auto& x = cheb_nodes();
    cplx num = 0.0;
    double den = 0.0;
    for (int j = 0; j <= kDegree; ++j) {
        const double diff = s - x[j];
        if (diff == 0.0) return it->second[j];
        double wj = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == kDegree) wj *= 0.5;
        const double c = wj / diff;
        num += c * it->second[j];
        den += c;
    }
    return num / den;
}

cplx PhiCache::double_sine(cplx z)
{
    validate_finite(z);
    const double Q = p_.Q;
    return std::exp(-kPi * kI * z * z / 2.0 + kPi * kI * (2.0 - Q * Q) / 24.0 - log_phi(2.0 * kPi * p_.b * z));
}

cplx PhiCache::faddeev_integral(cplx u, cplx w)
{
    return faddeev_core(u, w, p_, cfg_, [&](cplx z) { return log_phi(z); });
}

cplx faddeev_rhs(cplx u, cplx w, const PlanckParams& p, const QuadratureConfig& cfg)
{
    const cplx iq2 = kI * p.Q / 2.0;
    return double_sine(2.0 * u - iq2, p, cfg) * double_sine(w + iq2, p, cfg) *
           double_sine(-2.0 * u - w + iq2, p, cfg);
}

}  // namespace clustertet
