// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  Every tolerance and time budget is fixed below.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "clustertet/kernel.hpp"
#include "clustertet/specialfn.hpp"
#include "clustertet/tropical.hpp"
#include "clustertet/wiring.hpp"

using namespace clustertet;

namespace {

constexpr double kBudgetAppendixSeconds = 1.0;
constexpr double kBudgetTrivialSeconds = 1.0;
constexpr double kBudgetClassicalSeconds = 5.0;
constexpr double kBudgetSpecialSeconds = 60.0;
constexpr double kTolClassical = 1e-9;
constexpr std::size_t kClassicalPoints = 100;
constexpr std::uint64_t kRngSeed = 42;
constexpr double kTolIdentities = 1e-8;
constexpr double kTolFaddeev = 1e-6;
constexpr double kTolPsiRatio = 1e-6;
constexpr double kTolSignIndependence = 1e-6;
constexpr int kSignIndependencePoints = 3;

std::string read_file(const std::string& name)
{
    std::ifstream in(std::string(CLUSTERTET_FIXTURE_DIR) + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::multiset<std::pair<std::string, std::string>> arrows(const Seed& s)
{
    std::multiset<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            for (std::int64_t m = 0; m < s.eps(i, j); ++m) out.emplace(s.labels()[j].str(), s.labels()[i].str());
    return out;
}

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

int failures = 0;

void run(int number, const std::string& title, const std::function<Outcome()>& body, double budget = 0.0)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget > 0.0 && seconds > budget) o.require(false, "runtime over budget of " + std::to_string(budget) + " s");
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %d: %s (%.3f s)%s%s\n", o.pass ? "PASS" : "FAIL", number, title.c_str(), seconds,
                o.detail.empty() ? "" : " -- ", o.detail.c_str());
    std::fflush(stdout);
}

int count_prefix(const std::string& table, const std::string& prefix)
{
    int n = 0;
    std::istringstream in(table);
    for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
    return n;
}

const Word& start_word()
{
    static const Word w = parse_word("123121");
    return w;
}

double max_cell_error(const std::vector<CheckRow>& rows, double tol, Outcome& o, const std::string& suite)
{
    double worst = 0.0;
    for (const auto& r : rows) {
        worst = std::max(worst, r.abs_err);
        o.require(r.abs_err < tol, suite + " " + r.check + " error " + std::to_string(r.abs_err));
    }
    return worst;
}

}  // namespace

int main()
{
    run(1, "appendix tables reproduced exactly", [] {
        Outcome o;
        const struct {
            QuiverFamily f;
            const char* file;
            int mutations;
            int swaps;
        } cases[] = {{QuiverFamily::Triangle, "appendix_triangle.md", 8, 2},
                     {QuiverFamily::Square, "appendix_square.md", 32, 4},
                     {QuiverFamily::Butterfly, "appendix_butterfly.md", 32, 4}};
        for (const auto& c : cases) {
            const TraceTable t(build_quiver(start_word(), c.f), loop_transform_s4(c.f), &appendix_aliases(c.f));
            const std::string md = t.markdown();
            o.require(md == read_file(c.file), to_string(c.f) + " table differs from fixture");
            o.require(count_prefix(md, "| μ_") == c.mutations, to_string(c.f) + " mutation row count");
            o.require(count_prefix(md, "| α_") == c.swaps, to_string(c.f) + " swap row count");
        }
        return o;
    }, kBudgetAppendixSeconds);

    run(2, "S4 loops are tropically trivial and restore ε", [] {
        Outcome o;
        for (QuiverFamily f : kAllFamilies) {
            const Seed s = build_quiver(start_word(), f);
            const ClusterTransformation t = loop_transform_s4(f);
            o.require(is_trivial(s, t), to_string(f) + " not trivial");
            o.require(apply_transformation(s, t) == s, to_string(f) + " ε not restored");
        }
        return o;
    }, kBudgetTrivialSeconds);

    run(3, "S4 loops fix random (A, X, B) points to 1e-9 at 100 points, seed 42", [] {
        Outcome o;
        for (QuiverFamily f : kAllFamilies) {
            const Seed s = build_quiver(start_word(), f);
            const auto c = transforms_equal_numeric(s, loop_transform_s4(f), ClusterTransformation{},
                                                    kClassicalPoints, kTolClassical, kRngSeed);
            o.require(c.equal, to_string(f) + " max_rel_err " + std::to_string(c.max_rel_err));
        }
        return o;
    }, kBudgetClassicalSeconds);

    run(4, "classical tetrahedron equation at tol 1e-9", [] {
        Outcome o;
        for (QuiverFamily f : kAllFamilies) {
            const auto [first, second] = tetrahedron_sides(f);
            const Seed s = build_quiver(first.words.front(), f);
            const auto c = transforms_equal_numeric(s, first.transform, second.transform, kClassicalPoints,
                                                    kTolClassical, kRngSeed);
            o.require(c.equal, to_string(f) + " max_rel_err " + std::to_string(c.max_rel_err));
        }
        return o;
    });

    run(5, "quiver fixtures, far commutativity and braid-move targets", [] {
        Outcome o;
        const auto doc = nlohmann::json::parse(read_file("quivers.json"));
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& e : doc) {
            const QuiverFamily f = parse_family(e["family"].get<std::string>());
            const std::string word = e["word"].get<std::string>();
            std::multiset<std::pair<std::string, std::string>> expected;
            for (const auto& a : e["arrows"]) expected.emplace(a[0].get<std::string>(), a[1].get<std::string>());
            o.require(arrows(build_quiver(parse_word(word), f)) == expected, to_string(f) + " " + word);
            seen.emplace(to_string(f), word);
        }
        for (QuiverFamily f : kAllFamilies)
            for (const char* w : {"121", "123121"})
                o.require(seen.count({to_string(f), w}) == 1, "fixture missing " + to_string(f) + " " + w);
        for (QuiverFamily f : kAllFamilies)
            o.require(build_quiver(parse_word("132312"), f) == build_quiver(parse_word("312132"), f),
                      to_string(f) + " far commutativity");
        const auto words = reduced_words_longest(4);
        o.require(words.size() == 16, "16 reduced words");
        int moves = 0;
        for (QuiverFamily f : kAllFamilies)
            for (const Word& w : words)
                for (int at = 1; at + 2 <= static_cast<int>(w.letters.size()); ++at) {
                    const auto& l = w.letters;
                    const auto i = static_cast<std::size_t>(at - 1);
                    if (l[i] != l[i + 2] || std::abs(l[i] - l[i + 1]) != 1) continue;
                    ++moves;
                    const Seed target = build_quiver(apply_braid_move(w, at).word, f);
                    o.require(apply_transformation(build_quiver(w, f), braid_move_transform(w, at, f)) == target,
                              to_string(f) + " " + w.str() + " at " + std::to_string(at));
                }
        o.require(moves > 0, "no braid moves found");
        return o;
    });

    run(6, "special-function identities, Faddeev integral and Ψ ratio", [] {
        Outcome o;
        SuiteOptions opts;
        opts.rng_seed = kRngSeed;
        for (const char* suite : {"difference", "unitarity", "inversion"})
            max_cell_error(run_check_suite(suite, opts), kTolIdentities, o, suite);
        const auto faddeev = run_check_suite("faddeev", opts);
        o.require(faddeev.size() >= 3, "fewer than 3 Faddeev points");
        max_cell_error(faddeev, kTolFaddeev, o, "faddeev");
        int ratio_rows = 0;
        for (const auto& r : run_check_suite("psi-ratio", opts)) {
            if (r.check != "psi-ratio") continue;
            ++ratio_rows;
            o.require(r.abs_err < kTolPsiRatio, "psi-ratio error " + std::to_string(r.abs_err));
        }
        o.require(ratio_rows >= 1, "no Ψ ratio point");
        return o;
    }, kBudgetSpecialSeconds);

    const Word w121 = parse_word("121");
    const Seed square121 = build_quiver(w121, QuiverFamily::Square);
    const ClusterTransformation square_move =
        normalize_transform(braid_move_transform(w121, 1, QuiverFamily::Square));

    run(7, "square braid-move kernel structure and charge conservation", [&] {
        Outcome o;
        const KernelSpec k = assemble_kernel(square121, square_move);
        o.require(k.int_vars.size() == 1, "internal variable count " + std::to_string(k.int_vars.size()));
        o.require(k.deltas.size() == 6, "identity delta count " + std::to_string(k.deltas.size()));
        auto rel = [](std::initializer_list<std::pair<const char*, std::int64_t>> terms) {
            AffineForm f;
            for (const auto& [n, c] : terms) f.add(n, c);
            return f;
        };
        const std::vector<AffineForm> expected = {
            rel({{"in:1_1", 1}, {"in:2_2", -1}, {"out:1_2", -1}, {"in:2_3", 1}}),
            rel({{"in:2_3", 1}, {"in:3_2", -1}, {"out:2_2", -1}, {"in:3_1", 1}}),
            rel({{"in:3_1", 1}, {"in:1_2", -1}, {"out:3_2", -1}, {"in:1_1", 1}}),
        };
        o.require(linearly_equivalent(k.monomial_deltas, expected), "delta constraints differ");
        std::vector<AffineForm> system = k.deltas;
        system.insert(system.end(), k.monomial_deltas.begin(), k.monomial_deltas.end());
        o.require(in_rational_span(system, rel({{"out:1_2", 1}, {"in:2_3", -1}, {"in:1_1", -1}, {"in:2_2", 1}})),
                  "charge identity not implied");
        return o;
    });

    run(8, "square braid-move kernel: all-(+) and all-(-) signs agree to 1e-6 at 3 points", [&] {
        Outcome o;
        const KernelSpec k = assemble_kernel(square121, square_move);
        const PlanckParams p = PlanckParams::from_b(1.0);
        Rng rng(kRngSeed);
        for (int i = 0; i < kSignIndependencePoints; ++i) {
            const auto boundary = random_boundary(k, rng);
            KernelEvalOptions plus, minus;
            plus.mode = minus.mode = KernelEvalOptions::Mode::SignIntegral;
            plus.signs = std::vector<int>(k.steps.size(), 1);
            minus.signs = std::vector<int>(k.steps.size(), -1);
            const cplx a = evaluate_kernel(k, boundary, p, {}, plus).value;
            const cplx b = evaluate_kernel(k, boundary, p, {}, minus).value;
            const double err = std::abs(a - b) / std::abs(b);
            o.require(std::abs(b) > 0.0 && err < kTolSignIndependence, "relative difference " + std::to_string(err));
        }
        return o;
    });

    run(9, "monomial matrices transport ε along the S4 loops; composite equals the permutation matrix", [] {
        Outcome o;
        for (QuiverFamily f : kAllFamilies) {
            Seed s = build_quiver(start_word(), f);
            const ClusterTransformation t = loop_transform_s4(f);
            for (const auto& step : t.steps) {
                const auto* m = std::get_if<Mutation>(&step);
                if (!m) continue;
                for (int sign : {1, -1}) {
                    const MonomialMatrix mm = monomial_matrix(s, m->k, sign);
                    o.require(mm.m * s.epsilon() * mm.m.transpose() == mutate(s, m->k).epsilon(),
                              to_string(f) + " transport at " + m->k.str());
                }
                s = mutate(s, m->k);
            }
            const Seed s0 = build_quiver(start_word(), f);
            const MonomialComposite c = monomial_composite(s0, t, tropical_signs(s0, t));
            const IntMatrix perm = permutation_matrix(s0, std::get<Automorphism>(t.steps.back()));
            o.require(c.m == perm, to_string(f) + " composite differs from permutation matrix");
            o.require(c.dual == perm, to_string(f) + " composite dual differs from permutation matrix");
        }
        return o;
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
