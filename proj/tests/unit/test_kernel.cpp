#include <doctest.h>

#include <cmath>
#include <set>

#include "clustertet/error.hpp"
#include "clustertet/kernel.hpp"
#include "clustertet/tropical.hpp"
#include "clustertet/wiring.hpp"

using namespace clustertet;

namespace {

constexpr double kPi = 3.14159265358979323846;

VertexLabel V(int i) { return VertexLabel::plain(i); }

AffineForm form(std::initializer_list<std::pair<const char*, std::int64_t>> terms, Rational iq = 0)
{
    AffineForm f;
    for (const auto& [n, c] : terms) f.add(n, c);
    f.iq_half = iq;
    return f;
}

IntMatrix matrix(const std::vector<std::vector<std::int64_t>>& rows)
{
    IntMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    return m;
}

struct SquareMove {
    Seed seed;
    ClusterTransformation t;
    KernelSpec spec;
};

SquareMove square_move()
{
    const Word w = parse_word("121");
    SquareMove s{build_quiver(w, QuiverFamily::Square),
                 normalize_transform(braid_move_transform(w, 1, QuiverFamily::Square)), {}};
    s.spec = assemble_kernel(s.seed, s.t);
    return s;
}

}  // namespace

TEST_CASE("rational arithmetic")
{
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -3) == Rational(-1, 3));
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(-3, 6).str() == "-1/2");
    CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("monomial matrices of the 2-vertex seed")
{
    const Seed s = make_seed({V(1), V(2)}, {{0, 1}, {-1, 0}});
    // x'_1 = -x_1, x'_2 = x_2 + [±ε_21]_+ x_1 with ε_21 = -1.
    const MonomialMatrix plus = monomial_matrix(s, V(1), 1);
    CHECK(plus.m == matrix({{-1, 0}, {0, 1}}));
    const MonomialMatrix minus = monomial_matrix(s, V(1), -1);
    CHECK(minus.m == matrix({{-1, 0}, {1, 1}}));
    CHECK(minus.m * minus.dual.transpose() == IntMatrix::identity(2));
    try {
        monomial_matrix(s, V(3), 1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownVertex);
    }
}

TEST_CASE("property: monomial matrices transport ε for random seeds and both signs")
{
    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4;
        std::vector<VertexLabel> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back(V(static_cast<int>(i + 1)));
        IntMatrix e(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                e(i, j) = static_cast<std::int64_t>(std::floor(rng.uniform(-2, 3)));
                e(j, i) = -e(i, j);
            }
        const Seed s(labels, e);
        for (const auto& k : labels)
            for (int sign : {1, -1}) {
                const MonomialMatrix mm = monomial_matrix(s, k, sign);
                CHECK(mm.m * s.epsilon() * mm.m.transpose() == mutate(s, k).epsilon());
                CHECK(mm.m * mm.dual.transpose() == IntMatrix::identity(n));
            }
    }
}

TEST_CASE("property: monomial composites with tropical signs reproduce the tropical states")
{
    for (QuiverFamily f : kAllFamilies) {
        const Seed s = build_quiver(parse_word("123121"), f);
        const ClusterTransformation t = loop_transform_s4(f);
        const auto signs = tropical_signs(s, t);
        const TraceResult trace = trace_transformation(s, t);
        // Prefix composites: row k[t] of the composite over the first t-1
        // mutations is the exponent vector γ[t].
        ClusterTransformation prefix;
        for (std::size_t step = 0; step < signs.size(); ++step) {
            ClusterTransformation norm = prefix;
            norm.steps.push_back(Automorphism{});
            const std::vector<int> prefix_signs(signs.begin(), signs.begin() + static_cast<long>(step));
            const MonomialComposite c = monomial_composite(s, norm, prefix_signs);
            const auto& g = trace.gamma.entries[step];
            const std::size_t row = s.index_of(g.k);
            for (std::size_t j = 0; j < s.size(); ++j) CHECK(c.m(row, j) == g.gamma[j]);
            CHECK(g.sign == signs[step]);
            prefix.steps.push_back(Mutation{g.k});
        }
    }
}

TEST_CASE("z-factor arguments of the 2-vertex seed")
{
    const Seed s = make_seed({V(1), V(2)}, {{0, 1}, {-1, 0}});
    const auto args = z_factor_arguments(s, V(1));
    CHECK(args[0] == form({{"σ_2", 1}}, -1));
    CHECK(args[1] == form({{"σ_1[t]", 1}, {"σ_1[t+1]", 1}, {"σ_2", -1}}, 1));
    CHECK(args[2] == form({{"σ_1[t]", -1}, {"σ_1[t+1]", -1}}, 1));
    AffineForm sum;
    for (const auto& a : args) sum.add(a, 1);
    sum.iq_half = args[0].iq_half + args[1].iq_half + args[2].iq_half;
    CHECK(sum == form({}, 1));
}

TEST_CASE("property: z-factor arguments sum to iQ/2 for every vertex")
{
    for (QuiverFamily f : kAllFamilies) {
        const Seed s = build_quiver(parse_word("123121"), f);
        for (const auto& k : s.labels()) {
            const auto args = z_factor_arguments(s, k);
            AffineForm sum;
            for (const auto& a : args) sum.add(a, 1);
            CHECK(sum.coeffs.empty());
            CHECK(args[0].iq_half == Rational(-1));
            CHECK(args[1].iq_half == Rational(1));
            CHECK(args[2].iq_half == Rational(1));
        }
    }
}

TEST_CASE("square braid-move kernel structure")
{
    const SquareMove sq = square_move();
    const KernelSpec& k = sq.spec;
    CHECK(k.int_vars == std::vector<std::string>{"int:2_2@2"});
    CHECK(k.deltas.size() == 6);
    CHECK(k.steps.size() == 4);
    CHECK(k.prefactor_power == 3);
    for (const auto& d : k.deltas) {
        CHECK(d.iq_half.is_zero());
        CHECK(d.coeffs.size() == 2);
    }
    const std::vector<AffineForm> expected = {
        form({{"in:1_1", 1}, {"in:2_2", -1}, {"out:1_2", -1}, {"in:2_3", 1}}),
        form({{"in:2_3", 1}, {"in:3_2", -1}, {"out:2_2", -1}, {"in:3_1", 1}}),
        form({{"in:3_1", 1}, {"in:1_2", -1}, {"out:3_2", -1}, {"in:1_1", 1}}),
    };
    CHECK(linearly_equivalent(k.monomial_deltas, expected));
    // Charge conservation: q_12' - q_12 = (out:1_2 - in:2_3) - (in:1_1 - in:2_2).
    std::vector<AffineForm> system = k.deltas;
    system.insert(system.end(), k.monomial_deltas.begin(), k.monomial_deltas.end());
    CHECK(in_rational_span(system, form({{"out:1_2", 1}, {"in:2_3", -1}, {"in:1_1", -1}, {"in:2_2", 1}})));
    CHECK_FALSE(in_rational_span(system, form({{"out:1_2", 1}, {"in:2_3", -1}})));
}

TEST_CASE("empty transformation: no factors, identity deltas only")
{
    const Seed s = build_quiver(parse_word("121"), QuiverFamily::Triangle);
    const KernelSpec k = assemble_kernel(s, normalize_transform({}));
    CHECK(k.steps.empty());
    CHECK(k.factors().empty());
    CHECK(k.int_vars.empty());
    CHECK(k.deltas.size() == s.size());
    CHECK(k.prefactor_power == 0);
    CHECK(gauge_theory_data(s, normalize_transform({})).rows.empty());
}

TEST_CASE("assembly errors")
{
    const Seed s = build_quiver(parse_word("121"), QuiverFamily::Triangle);
    const ClusterTransformation raw{{Mutation{VertexLabel::parse("C:{2}")}}};
    try {
        assemble_kernel(s, raw);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotNormalized);
    }
    try {
        assemble_kernel(s, normalize_transform(raw), std::vector<int>{1, 1});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("triangle braid-move kernel equals the hand-built double-sine product")
{
    const Word w = parse_word("121");
    const Seed s = build_quiver(w, QuiverFamily::Triangle);
    const KernelSpec k = assemble_kernel(s, normalize_transform(braid_move_transform(w, 1, QuiverFamily::Triangle)));
    REQUIRE(k.int_vars.empty());
    Rng rng(42);
    const auto boundary = random_boundary(k, rng);
    const PlanckParams p = PlanckParams::from_b(0.9);
    const KernelValue v = evaluate_kernel(k, boundary, p);
    CHECK_FALSE(v.delta_violated);
    // μ_{2} on the quiver of 121, σ'_{2} = out:{1,3}; every argument gets
    // imaginary part (Q/2)(1 - 2/3).
    const VertexLabel two = VertexLabel::parse("C:{2}");
    const std::size_t kk = s.index_of(two);
    double s1 = 0, s2 = boundary.at("in:{2}") + boundary.at("out:{1,3}"), s3 = -s2;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double x = boundary.at("in:" + s.labels()[j].display());
        const auto e = s.eps(kk, j);
        s1 += static_cast<double>(e) * x;
        if (e > 0) s2 -= static_cast<double>(e) * x;
        if (e < 0) s3 -= static_cast<double>(e) * x;
    }
    const cplx shift(0.0, p.Q / 6.0);
    const cplx expected =
        double_sine(s1 + shift, p) * double_sine(s2 + shift, p) * double_sine(s3 + shift, p) / (kPi * p.b);
    CHECK(std::abs(v.value - expected) < 1e-9 * std::abs(expected));
}

TEST_CASE("a delta violated by 0.1 gives a tagged zero")
{
    const SquareMove sq = square_move();
    Rng rng(42);
    auto boundary = random_boundary(sq.spec, rng);
    const auto& d = sq.spec.deltas.front();
    boundary[d.coeffs.begin()->first] += 0.1;
    const KernelValue v = evaluate_kernel(sq.spec, boundary, PlanckParams::from_b(1.0));
    CHECK(v.delta_violated);
    CHECK(v.value == cplx(0.0));
    CHECK(v.max_delta_residual == doctest::Approx(0.1));
}

TEST_CASE("evaluation input validation")
{
    const SquareMove sq = square_move();
    Rng rng(42);
    auto boundary = random_boundary(sq.spec, rng);
    KernelEvalOptions bad;
    bad.r_charges = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(evaluate_kernel(sq.spec, boundary, PlanckParams::from_b(1.0), {}, bad), Error);
    boundary.erase(sq.spec.in_vars.front());
    CHECK_THROWS_AS(evaluate_kernel(sq.spec, boundary, PlanckParams::from_b(1.0)), Error);
}

TEST_CASE("gauge theory data of the square braid move")
{
    const SquareMove sq = square_move();
    const ChargeTable table = gauge_theory_data(sq.seed, sq.t);
    CHECK(table.rows.size() == 12);
    CHECK(table.gauged.size() == 1);
    CHECK(table.chern_simons == 0);
    CHECK(table.fayet_iliopoulos == 0);
    for (std::size_t i = 0; i < table.rows.size(); i += 3) {
        const Rational sum = table.rows[i].r_charge + table.rows[i + 1].r_charge + table.rows[i + 2].r_charge;
        CHECK(sum == Rational(2));
    }
    const std::string csv = charge_table_csv(table);
    CHECK(csv.rfind("t,kind,r_charge,charges\r\n", 0) == 0);
}

TEST_CASE("kernel composition")
{
    const SquareMove sq = square_move();
    const Word w2 = apply_braid_move(parse_word("121"), 1).word;
    const KernelSpec back = assemble_kernel(build_quiver(w2, QuiverFamily::Square),
                                            normalize_transform(braid_move_transform(w2, 1, QuiverFamily::Square)));
    const KernelSpec c = compose_kernels(sq.spec, back);
    CHECK(c.steps.size() == 8);
    CHECK(c.jacobian == 1);
    for (const auto& v : c.in_vars) CHECK(v.rfind("in:", 0) == 0);
    for (const auto& v : c.out_vars) CHECK(v.rfind("out:", 0) == 0);
    // Every variable used by a factor is declared.
    std::set<std::string> declared(c.in_vars.begin(), c.in_vars.end());
    declared.insert(c.out_vars.begin(), c.out_vars.end());
    declared.insert(c.int_vars.begin(), c.int_vars.end());
    for (const auto& f : c.factors())
        for (const auto& [n, coef] : f.coeffs) CHECK(declared.count(n) == 1);
    const nlohmann::json j = kernel_to_json(c);
    CHECK(j["factors"].size() == 24);
}

TEST_CASE("JSON form of affine forms")
{
    const nlohmann::json j = affine_to_json(form({{"a", 2}, {"b", -1}}, Rational(1, 2)));
    CHECK(j["coeffs"]["a"] == 2);
    CHECK(j["coeffs"]["b"] == -1);
    CHECK(j["iq_half"] == "1/2");
}
