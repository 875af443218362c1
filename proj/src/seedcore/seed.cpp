#include "clustertet/seed.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "clustertet/error.hpp"

namespace clustertet {

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::IntegerOverflow, "int64 addition overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::IntegerOverflow, "int64 multiplication overflow");
    return r;
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const
{
    if (rhs.n_ != n_) throw Error(ErrorCode::DimensionMismatch, "matrix product of different sizes");
    IntMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t l = 0; l < n_; ++l) {
            std::int64_t a = (*this)(i, l);
            if (a == 0) continue;
            for (std::size_t j = 0; j < n_; ++j)
                if (rhs(l, j) != 0) out(i, j) = checked_add(out(i, j), checked_mul(a, rhs(l, j)));
        }
    return out;
}

Seed::Seed(std::vector<VertexLabel> labels, IntMatrix epsilon)
    : labels_(std::move(labels)), eps_(std::move(epsilon))
{
    if (eps_.size() != labels_.size())
        throw Error(ErrorCode::DimensionMismatch, "exchange matrix size " + std::to_string(eps_.size()) +
                                                      " does not match " + std::to_string(labels_.size()) +
                                                      " labels");
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (!index_.emplace(labels_[i], i).second)
            throw Error(ErrorCode::DuplicateLabel, "label " + labels_[i].str() + " appears twice");
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i; j < size(); ++j)
            if (eps_(i, j) != -eps_(j, i))
                throw Error(ErrorCode::NonSkewSymmetric, "entries (" + labels_[i].str() + ", " + labels_[j].str() +
                                                             ") violate skew-symmetry");
}

std::size_t Seed::index_of(const VertexLabel& label) const
{
    auto it = index_.find(label);
    if (it == index_.end()) throw Error(ErrorCode::UnknownVertex, "vertex " + label.str() + " is not in the seed");
    return it->second;
}

std::int64_t Seed::eps(const VertexLabel& i, const VertexLabel& j) const
{
    return eps_(index_of(i), index_of(j));
}

std::int64_t Seed::arrow_count() const
{
    std::int64_t count = 0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (eps_(i, j) > 0) count += eps_(i, j);
    return count;
}

bool Seed::operator==(const Seed& other) const
{
    if (size() != other.size()) return false;
    std::vector<std::size_t> map(size());
    for (std::size_t i = 0; i < size(); ++i) {
        auto it = other.index_.find(labels_[i]);
        if (it == other.index_.end()) return false;
        map[i] = it->second;
    }
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (eps_(i, j) != other.eps_(map[i], map[j])) return false;
    return true;
}

Seed make_seed(std::vector<VertexLabel> labels, const std::vector<std::vector<std::int64_t>>& epsilon)
{
    IntMatrix m(epsilon.size());
    for (std::size_t i = 0; i < epsilon.size(); ++i) {
        if (epsilon[i].size() != epsilon.size())
            throw Error(ErrorCode::DimensionMismatch, "exchange matrix is not square");
        for (std::size_t j = 0; j < epsilon.size(); ++j) m(i, j) = epsilon[i][j];
    }
    return Seed(std::move(labels), std::move(m));
}

Automorphism::Automorphism(std::map<VertexLabel, VertexLabel> moved)
{
    std::set<VertexLabel> keys, values;
    for (const auto& [from, to] : moved) {
        keys.insert(from);
        if (!values.insert(to).second)
            throw Error(ErrorCode::NotABijection, "two labels are sent to " + to.str());
    }
    if (keys != values) throw Error(ErrorCode::NotABijection, "relabeling does not permute its support");
    for (auto& [from, to] : moved)
        if (from != to) moved_.emplace(from, to);
}

Automorphism Automorphism::swap(const VertexLabel& a, const VertexLabel& b)
{
    return Automorphism({{a, b}, {b, a}});
}

VertexLabel Automorphism::operator()(const VertexLabel& label) const
{
    auto it = moved_.find(label);
    return it == moved_.end() ? label : it->second;
}

Automorphism Automorphism::inverse() const
{
    std::map<VertexLabel, VertexLabel> inv;
    for (const auto& [from, to] : moved_) inv.emplace(to, from);
    return Automorphism(std::move(inv));
}

Automorphism Automorphism::then(const Automorphism& next) const
{
    std::set<VertexLabel> support;
    for (const auto& kv : moved_) support.insert(kv.first);
    for (const auto& kv : next.moved_) support.insert(kv.first);
    std::map<VertexLabel, VertexLabel> composed;
    for (const auto& label : support) composed.emplace(label, next((*this)(label)));
    return Automorphism(std::move(composed));
}

ClusterTransformation ClusterTransformation::inverse() const
{
    ClusterTransformation inv;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        if (const auto* alpha = std::get_if<Automorphism>(&*it))
            inv.steps.emplace_back(alpha->inverse());
        else
            inv.steps.push_back(*it);
    }
    return inv;
}

ClusterTransformation ClusterTransformation::then(const ClusterTransformation& next) const
{
    ClusterTransformation out = *this;
    out.steps.insert(out.steps.end(), next.steps.begin(), next.steps.end());
    return out;
}

std::size_t ClusterTransformation::mutation_count() const
{
    return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const TransformationStep& s) {
        return std::holds_alternative<Mutation>(s);
    }));
}

bool ClusterTransformation::is_normalized() const
{
    if (steps.empty() || !std::holds_alternative<Automorphism>(steps.back())) return false;
    return mutation_count() + 1 == steps.size();
}

namespace {

// ½(|a|b + a|b|): ab when a and b share a strict sign, zero otherwise.
std::int64_t two_path_term(std::int64_t a, std::int64_t b)
{
    if (a > 0 && b > 0) return checked_mul(a, b);
    if (a < 0 && b < 0) return -checked_mul(a, b);
    return 0;
}

void check_point(const Seed& seed, const TorusPoint& p)
{
    if (p.A.size() != seed.size() || p.X.size() != seed.size() || p.B.size() != seed.size())
        throw Error(ErrorCode::DimensionMismatch, "torus point does not match the seed size");
}

TorusPoint mutate_point(const Seed& seed, std::size_t k, const TorusPoint& p)
{
    const std::size_t n = seed.size();
    TorusPoint q = p;
    double a_plus = 1.0, a_minus = 1.0, b_plus = 1.0, b_minus = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::int64_t e = seed.eps(k, j);
        if (e > 0) {
            a_plus *= std::pow(p.A[j], static_cast<double>(e));
            b_plus *= std::pow(p.B[j], static_cast<double>(e));
        } else if (e < 0) {
            a_minus *= std::pow(p.A[j], static_cast<double>(-e));
            b_minus *= std::pow(p.B[j], static_cast<double>(-e));
        }
    }
    q.A[k] = (a_plus + a_minus) / p.A[k];
    q.B[k] = (p.X[k] * b_plus + b_minus) / (p.B[k] * (1.0 + p.X[k]));
    q.X[k] = 1.0 / p.X[k];
    for (std::size_t i = 0; i < n; ++i) {
        if (i == k) continue;
        std::int64_t e = seed.eps(i, k);
        if (e == 0) continue;
        // X_i (1 + X_k^{sgn(-ε_ik)})^{-ε_ik}
        double base = e < 0 ? 1.0 + p.X[k] : 1.0 + 1.0 / p.X[k];
        q.X[i] = p.X[i] * std::pow(base, static_cast<double>(-e));
    }
    return q;
}

TorusPoint permute_point(const Seed& seed, const Automorphism& alpha, const TorusPoint& p)
{
    TorusPoint q = p;
    for (std::size_t i = 0; i < seed.size(); ++i) {
        std::size_t target = seed.index_of(alpha(seed.labels()[i]));
        q.A[target] = p.A[i];
        q.X[target] = p.X[i];
        q.B[target] = p.B[i];
    }
    return q;
}

}  // namespace

Seed mutate(const Seed& seed, const VertexLabel& label)
{
    const std::size_t k = seed.index_of(label);
    const std::size_t n = seed.size();
    IntMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == k || j == k)
                out(i, j) = -seed.eps(i, j);
            else
                out(i, j) = checked_add(seed.eps(i, j), two_path_term(seed.eps(i, k), seed.eps(k, j)));
        }
    return Seed(seed.labels(), std::move(out));
}

Seed permute(const Seed& seed, const Automorphism& alpha)
{
    const std::size_t n = seed.size();
    std::vector<std::size_t> target(n);
    for (const auto& [from, to] : alpha.moved()) {
        seed.index_of(from);
        seed.index_of(to);
    }
    for (std::size_t i = 0; i < n; ++i) target[i] = seed.index_of(alpha(seed.labels()[i]));
    IntMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(target[i], target[j]) = seed.eps(i, j);
    return Seed(seed.labels(), std::move(out));
}

Seed apply_step(const Seed& seed, const TransformationStep& step)
{
    if (const auto* m = std::get_if<Mutation>(&step)) return mutate(seed, m->k);
    return permute(seed, std::get<Automorphism>(step));
}

std::pair<Seed, TorusPoint> apply_step(const Seed& seed, const TransformationStep& step, const TorusPoint& point)
{
    check_point(seed, point);
    if (const auto* m = std::get_if<Mutation>(&step)) {
        std::size_t k = seed.index_of(m->k);
        return {mutate(seed, m->k), mutate_point(seed, k, point)};
    }
    const auto& alpha = std::get<Automorphism>(step);
    Seed next = permute(seed, alpha);
    return {std::move(next), permute_point(seed, alpha, point)};
}

Seed apply_transformation(const Seed& seed, const ClusterTransformation& t)
{
    Seed current = seed;
    for (const auto& step : t.steps) current = apply_step(current, step);
    return current;
}

std::pair<Seed, TorusPoint> apply_transformation(const Seed& seed, const ClusterTransformation& t,
                                                 const TorusPoint& point)
{
    std::pair<Seed, TorusPoint> state{seed, point};
    check_point(seed, point);
    for (const auto& step : t.steps) state = apply_step(state.first, step, state.second);
    return state;
}

ClusterTransformation normalize_transform(const ClusterTransformation& t)
{
    ClusterTransformation out;
    Automorphism accumulated;
    for (const auto& step : t.steps) {
        if (const auto* m = std::get_if<Mutation>(&step)) {
            out.steps.emplace_back(Mutation{accumulated.inverse()(m->k)});
        } else {
            accumulated = accumulated.then(std::get<Automorphism>(step));
        }
    }
    out.steps.emplace_back(accumulated);
    return out;
}

double Rng::uniform(double lo, double hi)
{
    double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

TorusPoint random_point(std::size_t n, Rng& rng)
{
    TorusPoint p;
    p.A.resize(n);
    p.X.resize(n);
    p.B.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.A[i] = rng.uniform(0.5, 2.0);
    for (std::size_t i = 0; i < n; ++i) p.X[i] = rng.uniform(0.5, 2.0);
    for (std::size_t i = 0; i < n; ++i) p.B[i] = rng.uniform(0.5, 2.0);
    return p;
}

double max_relative_error(const TorusPoint& a, const TorusPoint& b)
{
    double worst = 0.0;
    auto scan = [&](const std::vector<double>& x, const std::vector<double>& y) {
        if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "torus points of different size");
        for (std::size_t i = 0; i < x.size(); ++i)
            worst = std::max(worst, std::abs(x[i] - y[i]) / std::max(std::abs(x[i]), std::abs(y[i])));
    };
    scan(a.A, b.A);
    scan(a.X, b.X);
    scan(a.B, b.B);
    return worst;
}

NumericComparison transforms_equal_numeric(const Seed& seed, const ClusterTransformation& t1,
                                           const ClusterTransformation& t2, std::size_t samples,
                                           double tol, std::uint64_t rng_seed)
{
    Seed s1 = apply_transformation(seed, t1);
    Seed s2 = apply_transformation(seed, t2);
    if (!(s1 == s2)) throw Error(ErrorCode::SeedMismatch, "the two transformations reach different seeds");
    Rng rng(rng_seed);
    NumericComparison result;
    for (std::size_t s = 0; s < samples; ++s) {
        TorusPoint p = random_point(seed.size(), rng);
        auto [f1, p1] = apply_transformation(seed, t1, p);
        auto [f2, p2] = apply_transformation(seed, t2, p);
        result.max_rel_err = std::max(result.max_rel_err, max_relative_error(p1, p2));
    }
    result.equal = result.max_rel_err <= tol;
    return result;
}

double dtorus_poisson_defect(const Seed& seed, const VertexLabel& k, const TorusPoint& point, double h)
{
    const std::size_t n = seed.size();
    const std::size_t kk = seed.index_of(k);
    const std::size_t dim = 2 * n;
    Seed next = mutate(seed, k);

    auto coords = [n](const TorusPoint& p) {
        std::vector<double> y(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = p.X[i];
            y[n + i] = p.B[i];
        }
        return y;
    };
    auto image = [&](const std::vector<double>& y) {
        TorusPoint p = point;
        for (std::size_t i = 0; i < n; ++i) {
            p.X[i] = y[i];
            p.B[i] = y[n + i];
        }
        return coords(mutate_point(seed, kk, p));
    };
    // Poisson tensor of the D-torus in coordinates (X, B).
    auto tensor = [n](const Seed& s, const std::vector<double>& y) {
        std::vector<double> P(4 * n * n, 0.0);
        const std::size_t d = 2 * n;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                P[i * d + j] = static_cast<double>(s.eps(i, j)) * y[i] * y[j];
            P[i * d + n + i] = y[i] * y[n + i];
            P[(n + i) * d + i] = -y[i] * y[n + i];
        }
        return P;
    };

    const std::vector<double> y0 = coords(point);
    std::vector<double> J(dim * dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<double> yp = y0, ym = y0;
        yp[c] += h;
        ym[c] -= h;
        auto fp = image(yp), fm = image(ym);
        for (std::size_t r = 0; r < dim; ++r) J[r * dim + c] = (fp[r] - fm[r]) / (2.0 * h);
    }
    const auto P = tensor(seed, y0);
    const auto P_new = tensor(next, image(y0));
    double defect = 0.0;
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
            double sum = 0.0;
            for (std::size_t c = 0; c < dim; ++c)
                for (std::size_t d = 0; d < dim; ++d) sum += J[a * dim + c] * P[c * dim + d] * J[b * dim + d];
            defect = std::max(defect, std::abs(sum - P_new[a * dim + b]));
        }
    return defect;
}

}  // namespace clustertet
