#include "clustertet/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>

#include "clustertet/error.hpp"
#include "clustertet/io.hpp"

namespace clustertet {
namespace {

const double kPi = std::acos(-1.0);
const cplx kI(0.0, 1.0);

std::string name_of(const VertexLabel& l) { return l.display(); }

void require_normalized(const ClusterTransformation& t)
{
    if (!t.is_normalized())
        throw Error(ErrorCode::NotNormalized, "transformation must be mutations followed by one automorphism");
}

}  // namespace

AffineForm& AffineForm::add(const std::string& name, std::int64_t c)
{
    if (c == 0) return *this;
    const std::int64_t v = checked_add(coeff(name), c);
    if (v == 0)
        coeffs.erase(name);
    else
        coeffs[name] = v;
    return *this;
}

AffineForm& AffineForm::add(const AffineForm& other, std::int64_t c)
{
    for (const auto& [name, v] : other.coeffs) add(name, checked_mul(v, c));
    iq_half = iq_half + other.iq_half * Rational(c);
    return *this;
}

std::int64_t AffineForm::coeff(const std::string& name) const
{
    auto it = coeffs.find(name);
    return it == coeffs.end() ? 0 : it->second;
}

std::string AffineForm::str() const
{
    std::string out;
    for (const auto& [name, c] : coeffs) {
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        const std::int64_t a = c < 0 ? -c : c;
        if (a != 1) out += std::to_string(a) + "*";
        out += name;
    }
    if (!iq_half.is_zero()) {
        const bool neg = iq_half.num < 0;
        const Rational a = neg ? -iq_half : iq_half;
        out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        out += (a == Rational(1) ? std::string() : a.str() + "*") + "iQ/2";
    }
    return out.empty() ? "0" : out;
}

std::array<AffineForm, 3> z_factor_arguments(const Seed& seed, const VertexLabel& k,
                                             const std::function<std::string(const VertexLabel&)>& current,
                                             const std::string& next_k)
{
    const std::size_t kk = seed.index_of(k);
    std::array<AffineForm, 3> a;
    const std::string sk = current(k);
    a[1].add(sk, 1).add(next_k, 1);
    a[2].add(sk, -1).add(next_k, -1);
    for (std::size_t j = 0; j < seed.size(); ++j) {
        const std::int64_t e = seed.eps(kk, j);
        if (e == 0) continue;
        const std::string sj = current(seed.labels()[j]);
        a[0].add(sj, e);
        a[1].add(sj, -std::max<std::int64_t>(0, e));
        a[2].add(sj, std::max<std::int64_t>(0, -e));
    }
    a[0].iq_half = Rational(-1);
    a[1].iq_half = Rational(1);
    a[2].iq_half = Rational(1);
    return a;
}

std::array<AffineForm, 3> z_factor_arguments(const Seed& seed, const VertexLabel& k)
{
    return z_factor_arguments(
        seed, k, [&](const VertexLabel& l) { return "σ_" + name_of(l) + (l == k ? "[t]" : ""); },
        "σ_" + name_of(k) + "[t+1]");
}

std::vector<AffineForm> KernelSpec::factors() const
{
    std::vector<AffineForm> out;
    for (const auto& s : steps)
        for (const auto& a : s.args) out.push_back(a);
    return out;
}

KernelSpec assemble_kernel(const Seed& seed, const ClusterTransformation& t, const std::optional<std::vector<int>>& signs)
{
    require_normalized(t);
    const Automorphism alpha = std::get<Automorphism>(t.steps.back());
    std::vector<VertexLabel> ks;
    for (const auto& step : t.steps)
        if (const auto* mu = std::get_if<Mutation>(&step)) ks.push_back(mu->k);
    const std::size_t L = ks.size();
    const std::vector<int> sg = signs ? *signs : tropical_signs(seed, t);
    if (sg.size() != L) throw Error(ErrorCode::DimensionMismatch, "one sign per mutation is required");
    for (int s : sg)
        if (s != 1 && s != -1) throw Error(ErrorCode::DomainViolation, "signs must be +1 or -1");

    // occurrences[label] = 1-based steps mutating it.
    std::map<VertexLabel, std::vector<std::size_t>> occurrences;
    for (std::size_t s = 0; s < L; ++s) occurrences[ks[s]].push_back(s + 1);

    // σ_i[t] for t = 1..L+1.
    auto sigma = [&](const VertexLabel& i, std::size_t t_) -> std::string {
        auto it = occurrences.find(i);
        std::size_t last = 0;
        if (it != occurrences.end())
            for (std::size_t s : it->second)
                if (s < t_) last = s;
        if (last == 0) return "in:" + name_of(i);
        if (last == it->second.back()) return "out:" + name_of(alpha(i));
        return "int:" + name_of(i) + "@" + std::to_string(last + 1);
    };

    KernelSpec spec;
    for (const auto& l : seed.labels()) {
        spec.in_vars.push_back("in:" + name_of(l));
        spec.out_vars.push_back("out:" + name_of(l));
    }
    for (std::size_t s = 1; s <= L; ++s)
        if (s != occurrences[ks[s - 1]].back()) spec.int_vars.push_back(sigma(ks[s - 1], s + 1));
    for (const auto& l : seed.labels()) {
        if (occurrences.count(l)) continue;
        AffineForm d;
        d.add("in:" + name_of(l), 1).add("out:" + name_of(alpha(l)), -1);
        spec.deltas.push_back(std::move(d));
    }

    Seed current = seed;
    for (std::size_t s = 1; s <= L; ++s) {
        const VertexLabel& k = ks[s - 1];
        KernelStep step;
        step.t = static_cast<int>(s);
        step.k = name_of(k);
        step.sign = sg[s - 1];
        step.args = z_factor_arguments(
            current, k, [&](const VertexLabel& l) { return sigma(l, s); }, sigma(k, s + 1));
        spec.steps.push_back(std::move(step));
        current = mutate(current, k);
    }
    spec.prefactor_power = static_cast<std::int64_t>(occurrences.size());

    const MonomialComposite mc = monomial_composite(seed, t, sg);
    for (std::size_t i = 0; i < seed.size(); ++i) {
        const VertexLabel& l = seed.labels()[i];
        if (!occurrences.count(l)) continue;
        AffineForm d;
        d.add("out:" + name_of(alpha(l)), 1);
        for (std::size_t j = 0; j < seed.size(); ++j) d.add("in:" + name_of(seed.labels()[j]), -mc.dual(i, j));
        spec.monomial_deltas.push_back(std::move(d));
    }
    return spec;
}

namespace {

AffineForm rename(const AffineForm& f, const std::function<std::string(const std::string&)>& r)
{
    AffineForm out;
    out.iq_half = f.iq_half;
    for (const auto& [name, c] : f.coeffs) out.add(r(name), c);
    return out;
}

KernelSpec rename(const KernelSpec& k, const std::function<std::string(const std::string&)>& r)
{
    KernelSpec out = k;
    for (auto& v : out.in_vars) v = r(v);
    for (auto& v : out.out_vars) v = r(v);
    for (auto& v : out.int_vars) v = r(v);
    for (auto& d : out.deltas) d = rename(d, r);
    for (auto& d : out.monomial_deltas) d = rename(d, r);
    for (auto& s : out.steps)
        for (auto& a : s.args) a = rename(a, r);
    return out;
}

bool starts_with(const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0; }

}  // namespace

KernelSpec compose_kernels(const KernelSpec& first, const KernelSpec& second)
{
    auto r1 = [](const std::string& v) {
        if (starts_with(v, "out:")) return "mid:" + v.substr(4);
        if (starts_with(v, "in:")) return v;
        return "a." + v;
    };
    auto r2 = [](const std::string& v) {
        if (starts_with(v, "in:")) return "mid:" + v.substr(3);
        if (starts_with(v, "out:")) return v;
        return "b." + v;
    };
    const KernelSpec a = rename(first, r1);
    const KernelSpec b = rename(second, r2);
    if (a.out_vars != b.in_vars) throw Error(ErrorCode::SeedMismatch, "kernels do not share a boundary");

    KernelSpec out;
    out.in_vars = a.in_vars;
    out.out_vars = b.out_vars;
    out.int_vars = a.int_vars;
    out.int_vars.insert(out.int_vars.end(), a.out_vars.begin(), a.out_vars.end());
    out.int_vars.insert(out.int_vars.end(), b.int_vars.begin(), b.int_vars.end());
    out.deltas = a.deltas;
    out.deltas.insert(out.deltas.end(), b.deltas.begin(), b.deltas.end());
    out.monomial_deltas = a.monomial_deltas;
    out.monomial_deltas.insert(out.monomial_deltas.end(), b.monomial_deltas.begin(), b.monomial_deltas.end());
    out.steps = a.steps;
    const int offset = static_cast<int>(a.steps.size());
    for (auto s : b.steps) {
        s.t += offset;
        out.steps.push_back(std::move(s));
    }
    // Deltas are in a-units and the shared variables carry the measure
    // da = πb dσ; every other internal variable is measured in σ.
    out.prefactor_power = checked_add(a.prefactor_power, b.prefactor_power) -
                          static_cast<std::int64_t>(a.out_vars.size());
    out.jacobian = checked_mul(a.jacobian, b.jacobian);

    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t di = 0; di < out.deltas.size() && !progress; ++di) {
            const AffineForm d = out.deltas[di];
            for (const auto& v : out.int_vars) {
                const std::int64_t c = d.coeff(v);
                if (c != 1 && c != -1) continue;
                // f - f_v c d removes v from f.
                auto eliminate = [&](AffineForm& f) {
                    const std::int64_t fv = f.coeff(v);
                    if (fv != 0) f.add(d, -fv * c);
                };
                out.deltas.erase(out.deltas.begin() + static_cast<std::ptrdiff_t>(di));
                for (auto& f : out.deltas) eliminate(f);
                for (auto& f : out.monomial_deltas) eliminate(f);
                for (auto& s : out.steps)
                    for (auto& arg : s.args) eliminate(arg);
                out.int_vars.erase(std::find(out.int_vars.begin(), out.int_vars.end(), v));
                out.prefactor_power = checked_add(out.prefactor_power, 1);
                progress = true;
                break;
            }
        }
    }
    // Constraints reduced to 0 = 0 carry no information.
    std::erase_if(out.deltas, [](const AffineForm& f) { return f.coeffs.empty() && f.iq_half.is_zero(); });
    return out;
}

namespace {

// Row-reduces the coefficient vectors over Q and returns the rank.
std::size_t rank_of(const std::vector<AffineForm>& forms)
{
    std::set<std::string> names;
    for (const auto& f : forms)
        for (const auto& [n, c] : f.coeffs) names.insert(n);
    const std::vector<std::string> cols(names.begin(), names.end());
    std::vector<std::vector<Rational>> m;
    for (const auto& f : forms) {
        std::vector<Rational> row;
        for (const auto& n : cols) row.emplace_back(f.coeff(n));
        m.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols.size() && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c].is_zero()) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][c].is_zero()) continue;
            const Rational factor = m[r][c] / m[rank][c];
            for (std::size_t j = c; j < cols.size(); ++j) m[r][j] = m[r][j] - factor * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

bool in_rational_span(const std::vector<AffineForm>& basis, const AffineForm& v)
{
    std::vector<AffineForm> extended = basis;
    extended.push_back(v);
    return rank_of(extended) == rank_of(basis);
}

bool linearly_equivalent(const std::vector<AffineForm>& a, const std::vector<AffineForm>& b)
{
    for (const auto& v : b)
        if (!in_rational_span(a, v)) return false;
    for (const auto& v : a)
        if (!in_rational_span(b, v)) return false;
    return true;
}

namespace {

// An affine form with its boundary part evaluated: value = c0 + Σ c_j x_j.
struct BoundForm {
    double c0 = 0.0;
    std::vector<double> c;
    double imag = 0.0;

    cplx at(const std::vector<double>& x) const
    {
        double re = c0;
        for (std::size_t j = 0; j < c.size(); ++j) re += c[j] * x[j];
        return {re, imag};
    }
};

double residual(const AffineForm& f, const std::map<std::string, double>& boundary)
{
    double r = 0.0;
    for (const auto& [n, c] : f.coeffs) {
        auto it = boundary.find(n);
        if (it == boundary.end()) throw Error(ErrorCode::DomainViolation, "delta involves unassigned variable " + n);
        r += static_cast<double>(c) * it->second;
    }
    return std::abs(r);
}

// Integral over the real line of a function decaying at both ends.  The
// support is located by stepping outward from the origin until the
// integrand stays below 1e-15 of the largest value seen.
cplx integrate_line(const std::function<cplx(double)>& g, double rel_tol, std::size_t max_nodes)
{
    constexpr double kStep = 0.5;
    constexpr double kMinExtent = 10.0;
    constexpr double kMaxExtent = 400.0;
    double peak = std::abs(g(0.0));
    auto edge = [&](double dir) {
        int small = 0;
        double x = 0.0;
        while (true) {
            x += dir * kStep;
            const double a = std::abs(g(x));
            peak = std::max(peak, a);
            small = (a <= 1e-15 * peak) ? small + 1 : 0;
            if (std::abs(x) >= kMinExtent && small >= 3) return x;
            if (std::abs(x) >= kMaxExtent)
                throw Error(ErrorCode::QuadratureNotConverged, "kernel integrand does not decay");
        }
    };
    const double hi = edge(1.0);
    const double lo = edge(-1.0);
    if (peak == 0.0) return 0.0;
    return integrate_adaptive(g, lo, hi, rel_tol * peak, max_nodes, 16).value;
}

}  // namespace

KernelValue evaluate_kernel(const KernelSpec& spec, const std::map<std::string, double>& boundary,
                            const PlanckParams& p, const QuadratureConfig& cfg, const KernelEvalOptions& opts)
{
    for (const auto* vars : {&spec.in_vars, &spec.out_vars})
        for (const auto& v : *vars)
            if (!boundary.count(v)) throw Error(ErrorCode::DomainViolation, "boundary variable " + v + " not assigned");
    double rsum = 0.0;
    for (double r : opts.r_charges) {
        if (!(r > 0.0)) throw Error(ErrorCode::DomainViolation, "R-charges must be positive");
        rsum += r;
    }
    if (std::abs(rsum - 2.0) > 1e-12) throw Error(ErrorCode::DomainViolation, "R-charges must sum to 2");
    if (spec.int_vars.size() > 2)
        throw Error(ErrorCode::UnsupportedDimension,
                    std::to_string(spec.int_vars.size()) + " internal variables; at most 2 are supported");

    KernelValue out;
    out.dimension = spec.int_vars.size();
    for (const auto& d : spec.deltas) out.max_delta_residual = std::max(out.max_delta_residual, residual(d, boundary));
    if (out.max_delta_residual > opts.delta_tol) {
        out.delta_violated = true;
        out.value = 0.0;
        return out;
    }

    std::vector<int> signs;
    for (const auto& s : spec.steps) signs.push_back(s.sign);
    if (opts.signs) {
        if (opts.signs->size() != spec.steps.size())
            throw Error(ErrorCode::DimensionMismatch, "one sign per step is required");
        signs = *opts.signs;
    }

    const Rational expected[3] = {Rational(-1), Rational(1), Rational(1)};
    std::vector<std::array<BoundForm, 3>> forms;
    for (const auto& s : spec.steps) {
        std::array<BoundForm, 3> bf;
        for (int a = 0; a < 3; ++a) {
            if (!(s.args[a].iq_half == expected[a]))
                throw Error(ErrorCode::DomainViolation, "unexpected constant part in a Z-factor argument");
            bf[a].c.assign(spec.int_vars.size(), 0.0);
            bf[a].imag = 0.5 * p.Q * (1.0 - opts.r_charges[a]);
            for (const auto& [n, c] : s.args[a].coeffs) {
                auto it = std::find(spec.int_vars.begin(), spec.int_vars.end(), n);
                if (it != spec.int_vars.end()) {
                    bf[a].c[static_cast<std::size_t>(it - spec.int_vars.begin())] += static_cast<double>(c);
                    continue;
                }
                auto b = boundary.find(n);
                if (b == boundary.end()) throw Error(ErrorCode::DomainViolation, "unassigned variable " + n);
                bf[a].c0 += static_cast<double>(c) * b->second;
            }
        }
        forms.push_back(bf);
    }

    PhiCache cache(p, cfg);
    std::map<std::tuple<double, double, double, double>, cplx> memo;
    const cplx iq2 = kI * p.Q / 2.0;
    auto integrand = [&](const std::vector<double>& x) -> cplx {
        cplx prod = 1.0;
        for (std::size_t s = 0; s < forms.size(); ++s) {
            const cplx a1 = forms[s][0].at(x), a2 = forms[s][1].at(x), a3 = forms[s][2].at(x);
            if (opts.mode == KernelEvalOptions::Mode::ClosedForm) {
                prod *= cache.double_sine(a1) * cache.double_sine(a2) * cache.double_sine(a3);
                continue;
            }
            const cplx u = (a1 + iq2) / 2.0;
            const cplx w = (signs[s] > 0 ? a3 : a2) - iq2;
            const auto key = std::make_tuple(u.real(), u.imag(), w.real(), w.imag());
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(key, cache.faddeev_integral(u, w)).first;
            prod *= it->second;
        }
        return prod;
    };

    cplx value;
    std::vector<double> x(spec.int_vars.size(), 0.0);
    if (x.empty()) {
        value = integrand(x);
    } else if (x.size() == 1) {
        value = integrate_line(
            [&](double v) {
                x[0] = v;
                return integrand(x);
            },
            opts.rel_tol, cfg.max_nodes);
    } else {
        value = integrate_line(
            [&](double v0) {
                return integrate_line(
                    [&](double v1) {
                        x[0] = v0;
                        x[1] = v1;
                        return integrand(x);
                    },
                    opts.rel_tol, cfg.max_nodes);
            },
            opts.rel_tol, cfg.max_nodes);
    }
    out.value = value * std::pow(kPi * p.b, -static_cast<double>(spec.prefactor_power)) /
                static_cast<double>(spec.jacobian);
    return out;
}

std::map<std::string, double> random_boundary(const KernelSpec& spec, Rng& rng, double half_width)
{
    std::map<std::string, double> values;
    for (const auto& v : spec.in_vars) values[v] = rng.uniform(-half_width, half_width);
    for (const auto& d : spec.deltas) {
        std::string target;
        for (const auto& [n, c] : d.coeffs)
            if (!values.count(n) && (c == 1 || c == -1)) target = n;
        if (target.empty()) continue;
        for (const auto& [n, c] : d.coeffs)
            if (n != target && !values.count(n)) values[n] = rng.uniform(-half_width, half_width);
        double rest = 0.0;
        for (const auto& [n, c] : d.coeffs)
            if (n != target) rest += static_cast<double>(c) * values[n];
        values[target] = -rest / static_cast<double>(d.coeff(target));
    }
    for (const auto& v : spec.out_vars)
        if (!values.count(v)) values[v] = rng.uniform(-half_width, half_width);
    return values;
}

ChargeTable gauge_theory_data(const Seed& seed, const ClusterTransformation& t)
{
    require_normalized(t);
    const KernelSpec spec = assemble_kernel(seed, t);
    ChargeTable table;
    for (const auto& s : spec.steps)
        for (int a = 0; a < 3; ++a) {
            ChargeRow row;
            row.t = s.t;
            row.kind = a + 1;
            row.charges = s.args[a].coeffs;
            row.r_charge = Rational(1) - s.args[a].iq_half;
            table.rows.push_back(std::move(row));
        }
    table.gauged = spec.int_vars;
    table.global = spec.in_vars;
    table.global.insert(table.global.end(), spec.out_vars.begin(), spec.out_vars.end());
    return table;
}

}  // namespace clustertet

namespace clustertet {

nlohmann::json affine_to_json(const AffineForm& f)
{
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& [n, c] : f.coeffs) coeffs[n] = c;
    return {{"coeffs", coeffs}, {"iq_half", f.iq_half.str()}};
}

nlohmann::json kernel_to_json(const KernelSpec& spec)
{
    nlohmann::json doc;
    doc["variables"] = {{"in", spec.in_vars}, {"out", spec.out_vars}, {"internal", spec.int_vars}};
    auto list = [](const std::vector<AffineForm>& forms) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& f : forms) arr.push_back(affine_to_json(f));
        return arr;
    };
    doc["deltas"] = list(spec.deltas);
    doc["factors"] = list(spec.factors());
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : spec.steps) {
        steps.push_back({{"t", s.t},
                         {"k", s.k},
                         {"sign", s.sign},
                         {"args", list(std::vector<AffineForm>(s.args.begin(), s.args.end()))}});
    }
    doc["steps"] = steps;
    doc["prefactor_power"] = spec.prefactor_power;
    doc["monomial_deltas"] = list(spec.monomial_deltas);
    doc["jacobian"] = spec.jacobian;
    return doc;
}

nlohmann::json charge_table_to_json(const ChargeTable& table)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table.rows) {
        nlohmann::json charges = nlohmann::json::object();
        for (const auto& [n, c] : r.charges) charges[n] = c;
        rows.push_back({{"t", r.t}, {"kind", r.kind}, {"r_charge", r.r_charge.str()}, {"charges", charges}});
    }
    return {{"chirals", rows},
            {"gauged", table.gauged},
            {"global", table.global},
            {"chern_simons", table.chern_simons},
            {"fayet_iliopoulos", table.fayet_iliopoulos}};
}

std::string charge_table_csv(const ChargeTable& table)
{
    std::string out = "t,kind,r_charge,charges\r\n";
    for (const auto& r : table.rows) {
        std::string charges;
        for (const auto& [n, c] : r.charges) {
            if (!charges.empty()) charges += ";";
            charges += n + ":" + std::to_string(c);
        }
        out += std::to_string(r.t) + "," + std::to_string(r.kind) + "," + csv_field(r.r_charge.str()) + "," +
               csv_field(charges) + "\r\n";
    }
    return out;
}

}  // namespace clustertet
