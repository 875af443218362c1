#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clustertet/seed.hpp"
#include "clustertet/specialfn.hpp"

namespace clustertet {

// Exact rational number with int64 numerator and positive denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t n, std::int64_t d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const { return Rational(-num, den); }
    bool operator==(const Rational& o) const = default;
    bool is_zero() const { return num == 0; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

// Monomial part of μ_k with sign ε on the x-symbols: x'_k = -x_k and
// x'_i = x_i + [ε ε_ik]_+ x_k.  `dual` is (m^{-1})^T, the action on the
// a- and b-symbols.
struct MonomialMatrix {
    IntMatrix m;
    IntMatrix dual;
    int sign = 1;
};

// Throws UnknownVertex; throws DomainViolation if sign is not ±1.  The
// construction verifies m·dualᵀ = 1 and m·ε·mᵀ = ε(μ_k(seed)).
MonomialMatrix monomial_matrix(const Seed& seed, const VertexLabel& k, int sign);

// Matrix with entry (i, α(i)) = 1 in the index order of `seed`.
IntMatrix permutation_matrix(const Seed& seed, const Automorphism& alpha);

// Tropical signs ε[t] of the mutations of a normalized transformation.
std::vector<int> tropical_signs(const Seed& seed, const ClusterTransformation& t);

// Composite x-map m = M_L ⋯ M_1 and its dual (M_L ⋯ M_1)^{-T} = D_L ⋯ D_1 over
// the mutations of a normalized transformation, in the index order of
// `seed`.  The trailing automorphism is not included.
struct MonomialComposite {
    IntMatrix m;
    IntMatrix dual;
    std::vector<MonomialMatrix> steps;
};
MonomialComposite monomial_composite(const Seed& seed, const ClusterTransformation& t, const std::vector<int>& signs);

// Integer combination of named variables plus a rational multiple of iQ/2.
struct AffineForm {
    std::map<std::string, std::int64_t> coeffs;
    Rational iq_half;

    // Adds c·name, dropping the entry if it cancels.
    AffineForm& add(const std::string& name, std::int64_t c);
    AffineForm& add(const AffineForm& other, std::int64_t c);
    std::int64_t coeff(const std::string& name) const;
    std::string str() const;
    bool operator==(const AffineForm&) const = default;
};

// The three double-sine arguments of Z_{μ_k}:
//   Σ_j ε_kj σ_j - iQ/2,
//   σ_k + σ'_k - Σ_j [ε_kj]_+ σ_j + iQ/2,
//   -σ_k - σ'_k + Σ_j [-ε_kj]_+ σ_j + iQ/2,
// where `current` names σ_j for every label and `next_k` names σ'_k.
std::array<AffineForm, 3> z_factor_arguments(const Seed& seed, const VertexLabel& k,
                                             const std::function<std::string(const VertexLabel&)>& current,
                                             const std::string& next_k);
// Names "σ_<label>[t]" for the current variables and "σ_<k>[t+1]" for σ'_k.
std::array<AffineForm, 3> z_factor_arguments(const Seed& seed, const VertexLabel& k);

// One mutation of the kernel: Z-factor arguments and the sign ε[t] used by
// the x-integral representation.
struct KernelStep {
    int t = 0;
    std::string k;
    int sign = 1;
    std::array<AffineForm, 3> args;
};

// Scalar data of the matrix element ⟨a[1]|K|a[L+2]⟩ in σ = a/(πb) units.
// Boundary variables are "in:<label>" and "out:<label>", internal ones
// "int:<label>@<t>" (σ_label[t]).
struct KernelSpec {
    std::vector<std::string> in_vars;
    std::vector<std::string> out_vars;
    std::vector<std::string> int_vars;
    // Identity-sector constraints in:l - out:α(l) = 0 for labels l never
    // mutated (after composition, whatever survives elimination).
    std::vector<AffineForm> deltas;
    std::vector<KernelStep> steps;
    // Exponent of (πb)^{-1}.
    std::int64_t prefactor_power = 0;
    // Relations out:α(k) = (D a)_k, k mutated, of the monomial part of the
    // transformation with the steps' signs.  Documentation of the
    // delta-function support of the monomial factor; not imposed on the
    // scalar kernel.
    std::vector<AffineForm> monomial_deltas;
    // Product of |c| over eliminated delta coefficients (1 unless a
    // composition eliminated a non-unit coefficient).
    std::int64_t jacobian = 1;

    // All Z-factor arguments, three per step, in step order.
    std::vector<AffineForm> factors() const;
};

// Throws NotNormalized unless t is (mutations, one automorphism).  Signs
// default to the tropical signs; an explicit vector needs one ±1 per
// mutation (DimensionMismatch otherwise).
KernelSpec assemble_kernel(const Seed& seed, const ClusterTransformation& t,
                           const std::optional<std::vector<int>>& signs = std::nullopt);

// Kernel of `first` followed by `second`: first's out variables and second's
// in variables are identified and integrated.  Deltas with a unit
// coefficient on an integrated variable are solved for it and substituted.
KernelSpec compose_kernels(const KernelSpec& first, const KernelSpec& second);

// Exact test whether v's coefficient vector lies in the rational span of the
// coefficient vectors of `basis`.
bool in_rational_span(const std::vector<AffineForm>& basis, const AffineForm& v);
// Both systems span the same space.
bool linearly_equivalent(const std::vector<AffineForm>& a, const std::vector<AffineForm>& b);

struct KernelEvalOptions {
    enum class Mode { ClosedForm, SignIntegral };
    Mode mode = Mode::ClosedForm;
    // R-charges of the three chiral multiplets of every step.  Each must be
    // positive and they must sum to 2; the argument with R-charge r gets the
    // constant part i(Q/2)(1 - r).
    std::array<double, 3> r_charges{2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
    // Overrides the steps' signs in SignIntegral mode.
    std::optional<std::vector<int>> signs;
    double delta_tol = 1e-12;
    // Relative cut-off for the internal integrals.
    double rel_tol = 1e-10;
};

struct KernelValue {
    std::complex<double> value;
    bool delta_violated = false;
    double max_delta_residual = 0.0;
    std::size_t dimension = 0;
};

// Integral over the internal variables of the product of the steps'
// factors, times (πb)^{-prefactor_power}.  ClosedForm uses the double-sine
// product of each step; SignIntegral evaluates each step's x-integral with
// its sign ε.  A boundary violating a delta by more than delta_tol returns a
// zero tagged delta_violated.  Throws UnsupportedDimension above two
// internal variables and DomainViolation for a missing boundary variable or
// invalid R-charges.
KernelValue evaluate_kernel(const KernelSpec& spec, const std::map<std::string, double>& boundary,
                            const PlanckParams& p, const QuadratureConfig& cfg = {},
                            const KernelEvalOptions& opts = {});

// Random boundary point satisfying the deltas: free variables uniform in
// [-lo, lo], the rest solved from unit-coefficient deltas.
std::map<std::string, double> random_boundary(const KernelSpec& spec, Rng& rng, double half_width = 0.5);

struct ChargeRow {
    int t = 0;
    int kind = 0;  // 1, 2, 3 in the order of the Z-factor arguments
    std::map<std::string, std::int64_t> charges;
    Rational r_charge;
};

struct ChargeTable {
    std::vector<ChargeRow> rows;
    std::vector<std::string> gauged;
    std::vector<std::string> global;
    // Chern-Simons levels and FI parameters, all zero.
    std::int64_t chern_simons = 0;
    std::int64_t fayet_iliopoulos = 0;
};

ChargeTable gauge_theory_data(const Seed& seed, const ClusterTransformation& t);

// {"coeffs": {var: int}, "iq_half": "p/q"}.
nlohmann::json affine_to_json(const AffineForm& f);
// {"variables": {"in", "out", "internal"}, "deltas", "factors", "steps",
//  "prefactor_power", "monomial_deltas", "jacobian"}.
nlohmann::json kernel_to_json(const KernelSpec& spec);
nlohmann::json charge_table_to_json(const ChargeTable& table);
// Header "t,kind,r_charge,charges"; charges as "var:c;var:c"; CRLF line ends.
std::string charge_table_csv(const ChargeTable& table);

}  // namespace clustertet
