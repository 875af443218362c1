#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <string>
#include <vector>

#include "clustertet/quadrature.hpp"

namespace clustertet {

// Planck constant ħ = b² with q = exp(πiħ), q∨ = exp(πi/ħ), Q = b + 1/b.
// The dual variables X^{q∨} and x^{ħ∨} are not represented.
struct PlanckParams {
    double hbar = 1.0;
    double b = 1.0;
    cplx q;
    cplx q_dual;
    double Q = 2.0;

    static PlanckParams from_b(double b);
    static PlanckParams from_hbar(double hbar);
};

struct QuadratureConfig {
    // Height δ of the contour Im w = δ; zero selects default_contour_offset.
    double contour_offset = 0.0;
    // Symmetric truncation |Re w| ≤ T; zero selects the adaptive truncation
    // derived from the exponential decay of the integrand.
    double truncation = 0.0;
    std::size_t max_nodes = 400000;
    double target_abs_err = 1e-11;
    // Allows phi to use Φ(z)Φ(-z) = Φ(0)² exp(z²/(4πiħ)) where the direct
    // contour integral loses relative precision (large positive Re z).  The
    // check suites switch it off so that they never test the relation
    // against itself.
    bool use_reflection = true;
};

// δ = min(1, Re τ/|τ|²)/2: halfway between the real axis and the nearest
// pole of the integrand above it.
double default_contour_offset(cplx tau);
// Width π(1 + Re τ) of the strip |Im z| < width where the integral converges.
double strip_half_width(cplx tau);
// Closed form Φ^τ(0) = exp(-πi(τ + 1/τ)/24).
cplx phi_at_zero(cplx tau);

// log Φ^τ(z) = -¼∫... by contour quadrature alone (continuous in z).
cplx log_phi_quadrature(cplx z, cplx tau, const QuadratureConfig& cfg = {});

// Φ^τ(z) by contour quadrature alone.  Requires Re τ > 0, Im τ ≥ 0 and
// |Im z| < strip_half_width(τ) (DomainViolation otherwise).
cplx phi_quadrature(cplx z, cplx tau, const QuadratureConfig& cfg = {});

// Φ^τ(z) for any finite z: quadrature inside 0.8 of the strip, difference
// equations to move Im z into it, and (real τ, cfg.use_reflection) the
// reflection relation when δ·Re z > 8.
cplx phi_tau(cplx z, cplx tau, const QuadratureConfig& cfg = {});
cplx phi(cplx z, const PlanckParams& p, const QuadratureConfig& cfg = {});

// s_b(z) = exp(-πiz²/2 + πi(2-Q²)/24) / Φ^{b²}(2πbz).
cplx double_sine(cplx z, const PlanckParams& p, const QuadratureConfig& cfg = {});

// ∏_{k=1}^{terms} (1 + q^{2k-1}x)^{-1}.  DivergentModulus when |q| ≥ 1.
cplx psi_truncated(cplx x, cplx q, std::size_t terms);

// ∫ Φ(2πb(x-u))/Φ(2πb(x+u)) e^{2πiwx} dx over the real line.  Requires
// Im(-u + iQ/2) > 0 and Im(-2u) < Im w < 0 (DomainViolation otherwise).
cplx faddeev_integral(cplx u, cplx w, const PlanckParams& p, const QuadratureConfig& cfg = {});
// s_b(2u - iQ/2) s_b(w + iQ/2) s_b(-2u - w + iQ/2).
cplx faddeev_rhs(cplx u, cplx w, const PlanckParams& p, const QuadratureConfig& cfg = {});

// Memoizing evaluator of Φ^{b²} for repeated use along horizontal lines.
// For |Im z| inside 0.8 of the strip, log Φ is interpolated on panels of a
// fixed grid in Re z by a degree-24 Chebyshev interpolant built on demand;
// elsewhere the value is computed directly.  Not thread-safe; use one
// instance per evaluation.
class PhiCache {
public:
    PhiCache(const PlanckParams& p, const QuadratureConfig& cfg = {});

    cplx log_phi(cplx z);
    cplx phi(cplx z) { return std::exp(log_phi(z)); }
    cplx double_sine(cplx z);
    // Same integral as the free faddeev_integral, through this cache.
    cplx faddeev_integral(cplx u, cplx w);

    const PlanckParams& params() const { return p_; }
    std::size_t panels_built() const { return panels_built_; }

    static constexpr int kDegree = 24;

private:
    using Panel = std::array<cplx, kDegree + 1>;
    struct Line {
        double width = 1.0;
        std::unordered_map<long long, Panel> panels;
    };

    cplx log_phi_direct(cplx z) const;
    Line& line(double y);

    PlanckParams p_;
    QuadratureConfig cfg_;
    cplx tau_;
    double bound_;
    std::map<double, Line> lines_;
    std::size_t panels_built_ = 0;
};

// One row of a named numeric check suite.
struct CheckRow {
    std::string check;
    // Flat list of named parameters; values are rendered as given.
    std::vector<std::pair<std::string, std::string>> params;
    cplx lhs;
    cplx rhs;
    double abs_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteOptions {
    std::optional<double> b;
    std::uint64_t rng_seed = 42;
    std::size_t samples = 20;
};

const std::vector<std::string>& check_suite_names();
// Suites: difference, unitarity, inversion, faddeev, psi-ratio, continuation.
// Throws ParseError for an unknown name.
std::vector<CheckRow> run_check_suite(const std::string& name, const SuiteOptions& opts,
                                      const QuadratureConfig& cfg = {});

}  // namespace clustertet
