#include <numeric>
#include <string>

#include "clustertet/error.hpp"
#include "clustertet/kernel.hpp"
#include "clustertet/tropical.hpp"

namespace clustertet {

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0) throw Error(ErrorCode::DomainViolation, "zero denominator");
    if (d < 0) {
        n = checked_mul(n, -1);
        d = checked_mul(d, -1);
    }
    const std::int64_t g = std::gcd(n, d);
    num = g == 0 ? 0 : n / g;
    den = g == 0 ? 1 : d / g;
}

Rational Rational::operator+(const Rational& o) const
{
    return Rational(checked_add(checked_mul(num, o.den), checked_mul(o.num, den)), checked_mul(den, o.den));
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const
{
    return Rational(checked_mul(num, o.num), checked_mul(den, o.den));
}

Rational Rational::operator/(const Rational& o) const
{
    if (o.num == 0) throw Error(ErrorCode::DomainViolation, "division by zero");
    return Rational(checked_mul(num, o.den), checked_mul(den, o.num));
}

std::string Rational::str() const
{
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

MonomialMatrix monomial_matrix(const Seed& seed, const VertexLabel& k, int sign)
{
    if (sign != 1 && sign != -1) throw Error(ErrorCode::DomainViolation, "sign must be +1 or -1");
    const std::size_t n = seed.size();
    const std::size_t kk = seed.index_of(k);
    MonomialMatrix out;
    out.sign = sign;
    out.m = IntMatrix::identity(n);
    out.m(kk, kk) = -1;
    for (std::size_t i = 0; i < n; ++i)
        if (i != kk) out.m(i, kk) = std::max<std::int64_t>(0, sign * seed.eps(i, kk));
    // m is an involution, so (m^{-1})^T = m^T.
    out.dual = out.m.transpose();
    if (!(out.m * out.dual.transpose() == IntMatrix::identity(n)))
        throw Error(ErrorCode::DomainViolation, "monomial matrix is not unimodular");
    if (!(out.m * seed.epsilon() * out.m.transpose() == mutate(seed, k).epsilon()))
        throw Error(ErrorCode::DomainViolation, "monomial matrix does not transport the exchange matrix");
    return out;
}

IntMatrix permutation_matrix(const Seed& seed, const Automorphism& alpha)
{
    IntMatrix p(seed.size());
    for (std::size_t i = 0; i < seed.size(); ++i) p(i, seed.index_of(alpha(seed.labels()[i]))) = 1;
    return p;
}

std::vector<int> tropical_signs(const Seed& seed, const ClusterTransformation& t)
{
    if (!t.is_normalized()) throw Error(ErrorCode::NotNormalized, "transformation must be normalized");
    const TraceResult trace = trace_transformation(seed, t);
    std::vector<int> signs;
    for (const auto& e : trace.gamma.entries) signs.push_back(e.sign);
    return signs;
}

MonomialComposite monomial_composite(const Seed& seed, const ClusterTransformation& t, const std::vector<int>& signs)
{
    if (!t.is_normalized()) throw Error(ErrorCode::NotNormalized, "transformation must be normalized");
    if (signs.size() != t.mutation_count())
        throw Error(ErrorCode::DimensionMismatch, "one sign per mutation is required");
    MonomialComposite out;
    out.m = IntMatrix::identity(seed.size());
    out.dual = IntMatrix::identity(seed.size());
    Seed current = seed;
    std::size_t s = 0;
    for (const auto& step : t.steps) {
        const auto* mu = std::get_if<Mutation>(&step);
        if (!mu) break;
        MonomialMatrix mm = monomial_matrix(current, mu->k, signs[s++]);
        out.m = mm.m * out.m;
        out.dual = mm.dual * out.dual;
        out.steps.push_back(std::move(mm));
        current = mutate(current, mu->k);
    }
    return out;
}

}  // namespace clustertet
