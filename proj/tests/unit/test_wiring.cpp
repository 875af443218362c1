#include <doctest.h>

#include <algorithm>
#include <set>

#include "clustertet/error.hpp"
#include "clustertet/tropical.hpp"
#include "clustertet/wiring.hpp"
#include "fixture_util.hpp"

using namespace clustertet;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::ParseError;
}

// Inversion count of the permutation obtained by swapping adjacent levels.
int inversions_by_simulation(const Word& w)
{
    std::vector<int> order(static_cast<std::size_t>(w.n));
    for (int i = 0; i < w.n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    for (int a : w.letters) std::swap(order[static_cast<std::size_t>(a - 1)], order[static_cast<std::size_t>(a)]);
    int inv = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j) inv += order[i] > order[j];
    return inv;
}

}  // namespace

TEST_CASE("word parsing and validation")
{
    const Word w = parse_word("123121");
    CHECK(w.n == 4);
    CHECK(w.letters == std::vector<int>{1, 2, 3, 1, 2, 1});
    CHECK(w.str() == "123121");
    CHECK(parse_word("1,2,11").n == 12);
    CHECK(code_of([] { make_word(3, {1, 3}); }) == ErrorCode::LetterOutOfRange);
    CHECK(code_of([] { make_word(3, {0}); }) == ErrorCode::LetterOutOfRange);
    CHECK(code_of([] { parse_word("12a"); }) == ErrorCode::ParseError);
}

TEST_CASE("word analysis")
{
    const WordAnalysis a = analyze_word(parse_word("123121"));
    CHECK(a.length == 6);
    CHECK(a.inversions == 6);
    CHECK(a.is_reduced);
    CHECK(a.is_longest);
    CHECK(a.permutation == std::vector<int>{4, 3, 2, 1});
    const WordAnalysis b = analyze_word(parse_word("11", 3));
    CHECK_FALSE(b.is_reduced);
    CHECK(b.inversions == 0);
}

TEST_CASE("property: inversion count agrees with direct simulation")
{
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> letters;
        const int len = 1 + static_cast<int>(rng.uniform(0, 8));
        for (int i = 0; i < len; ++i) letters.push_back(1 + static_cast<int>(rng.uniform(0, 4)));
        const Word w = make_word(5, letters);
        const WordAnalysis a = analyze_word(w);
        CHECK(a.inversions == inversions_by_simulation(w));
        CHECK(a.is_reduced == (a.inversions == len));
    }
}

TEST_CASE("reduced words of the longest element")
{
    // Counts 1, 2, 16, 768 of reduced words of w0 in S_2..S_5.
    CHECK(reduced_words_longest(2).size() == 1);
    CHECK(reduced_words_longest(3).size() == 2);
    const auto s4 = reduced_words_longest(4);
    CHECK(s4.size() == 16);
    CHECK(std::is_sorted(s4.begin(), s4.end(), [](const Word& a, const Word& b) { return a.letters < b.letters; }));
    CHECK(reduced_words_longest(5).size() == 768);
    for (const auto& w : s4) CHECK(analyze_word(w).is_longest);
}

TEST_CASE("wiring diagram of 121")
{
    const WiringDiagram d = build_diagram(parse_word("121"));
    REQUIRE(d.crossings.size() == 3);
    CHECK(d.crossings[0].label().str() == "X:12");
    CHECK(d.crossings[1].label().str() == "X:13");
    CHECK(d.crossings[2].label().str() == "X:23");
    // The two breadth-first walks agree with the stored chamber sets.
    CHECK(chamber_walk(d, false) == d.chamber_sets);
    CHECK(chamber_walk(d, true) == d.chamber_sets);
    std::vector<std::string> chambers;
    for (const auto& c : d.chamber_labels()) chambers.push_back(c.str());
    CHECK(chambers == std::vector<std::string>{"C:{}", "C:{1}", "C:{2}", "C:{3}", "C:{1,2}", "C:{2,3}", "C:{1,2,3}"});
}

TEST_CASE("quivers match the fixture arrow sets")
{
    for (const auto& entry : fixture::quivers()) {
        const QuiverFamily f = parse_family(entry["family"].get<std::string>());
        const Word w = parse_word(entry["word"].get<std::string>());
        CAPTURE(entry["family"].get<std::string>());
        CAPTURE(w.str());
        CHECK(fixture::arrows(build_quiver(w, f)) == fixture::arrows(entry));
    }
}

TEST_CASE("braid moves and far commutativity")
{
    const BraidMoveResult r = apply_braid_move(parse_word("121"), 1);
    CHECK(r.word.str() == "212");
    CHECK_FALSE(r.inverse);
    CHECK(r.wires == std::array<int, 3>{1, 2, 3});
    const BraidMoveResult back = apply_braid_move(r.word, 1);
    CHECK(back.word.str() == "121");
    CHECK(back.inverse);
    CHECK(code_of([] { apply_braid_move(parse_word("123"), 1); }) == ErrorCode::NotApplicable);
    CHECK(code_of([] { apply_braid_move(parse_word("121"), 2); }) == ErrorCode::NotApplicable);
    CHECK(far_commute(parse_word("132312"), 1).str() == "312312");
    CHECK(code_of([] { far_commute(parse_word("121"), 1); }) == ErrorCode::NotApplicable);
}

TEST_CASE("far commutativity leaves every quiver unchanged")
{
    for (QuiverFamily f : kAllFamilies) {
        CAPTURE(to_string(f));
        CHECK(build_quiver(parse_word("132312"), f) == build_quiver(parse_word("312132"), f));
        CHECK(build_quiver(parse_word("132312"), f) == build_quiver(far_commute(parse_word("132312"), 1), f));
    }
}

TEST_CASE("property: braid-move transformations map source quiver to target quiver")
{
    for (QuiverFamily f : kAllFamilies)
        for (const Word& w : reduced_words_longest(4))
            for (int at = 1; at + 2 <= static_cast<int>(w.letters.size()); ++at) {
                const int a = w.letters[static_cast<std::size_t>(at - 1)];
                const int b = w.letters[static_cast<std::size_t>(at)];
                if (w.letters[static_cast<std::size_t>(at + 1)] != a || std::abs(a - b) != 1) continue;
                const ClusterTransformation t = braid_move_transform(w, at, f);
                CHECK(apply_transformation(build_quiver(w, f), t) ==
                      build_quiver(apply_braid_move(w, at).word, f));
            }
}

TEST_CASE("braid-move mutation counts per family")
{
    const Word w = parse_word("121");
    CHECK(braid_move_transform(w, 1, QuiverFamily::Triangle).mutation_count() == 1);
    CHECK(braid_move_transform(w, 1, QuiverFamily::Square).mutation_count() == 4);
    CHECK(braid_move_transform(w, 1, QuiverFamily::Butterfly).mutation_count() == 4);
}

TEST_CASE("padding renaming keeps realized labels and pads order-preservingly")
{
    for (QuiverFamily f : kAllFamilies) {
        const PathResult p = loop_path_s4(f);
        const Word start = parse_word("123121");
        CHECK(p.final_word == start);
        CHECK(p.transform.is_normalized());
        const Seed s = build_quiver(start, f);
        const auto realized = realized_labels(start, f);
        const std::set<VertexLabel> real(realized.begin(), realized.end());
        const auto& alpha = std::get<Automorphism>(p.transform.steps.back());
        for (const auto& [from, to] : alpha.moved()) {
            CHECK(real.count(from) == 1);
            CHECK(real.count(to) == 1);
        }
        // Both transformations act identically on the seed.
        CHECK(apply_transformation(s, p.transform) == apply_transformation(s, p.raw_transform));
    }
}

TEST_CASE("tetrahedron sides start and end at the expected words")
{
    for (QuiverFamily f : kAllFamilies) {
        const auto [first, second] = tetrahedron_sides(f);
        CHECK(first.final_word.str() == second.final_word.str());
        CHECK(apply_transformation(build_quiver(first.words.front(), f), first.transform) ==
              build_quiver(first.final_word, f));
        CHECK(apply_transformation(build_quiver(second.words.front(), f), second.transform) ==
              build_quiver(second.final_word, f));
    }
}

namespace {

std::set<std::string> strs(const std::vector<VertexLabel>& v)
{
    std::set<std::string> out;
    for (const auto& l : v) out.insert(l.str());
    return out;
}

VertexLabel L(const char* s) { return VertexLabel::parse(s); }

// Normalized steps of a transformation written in application order.
std::vector<TransformationStep> normalized(std::vector<TransformationStep> steps)
{
    return normalize_transform(ClusterTransformation{std::move(steps)}).steps;
}

}  // namespace

TEST_CASE("wiring diagram labels for small words")
{
    const WiringDiagram d = build_diagram(parse_word("121"));
    CHECK(strs(d.crossing_labels()) == std::set<std::string>{"X:12", "X:13", "X:23"});
    CHECK(strs(d.segment_labels()).count("S:1_1") == 1);
    CHECK(strs(d.segment_labels()).count("S:1_3") == 1);
    const WiringDiagram empty = build_diagram(make_word(2, {}));
    CHECK(strs(empty.chamber_labels()) == std::set<std::string>{"C:{}", "C:{1}", "C:{1,2}"});
    CHECK(empty.crossings.empty());
    const WiringDiagram big = build_diagram(parse_word("123121"));
    CHECK(big.chamber_labels().size() == 11);
    CHECK(big.crossing_labels().size() == 6);
    CHECK(big.segment_labels().size() == 16);
    for (int wire = 1; wire <= 4; ++wire) CHECK(big.segment(6, wire).second() == 4);
}

TEST_CASE("quiver sizes and padding of the 121 quivers")
{
    const Word w = parse_word("121");
    const Seed tri = build_quiver(w, QuiverFamily::Triangle);
    CHECK(realized_labels(w, QuiverFamily::Triangle).size() == 7);
    CHECK(tri.contains(L("C:{1,3}")));
    for (const auto& l : tri.labels())
        if (l == L("C:{1,3}"))
            for (std::size_t j = 0; j < tri.size(); ++j) CHECK(tri.eps(tri.index_of(l), j) == 0);
    CHECK(build_quiver(w, QuiverFamily::Square).size() == 9);
}

TEST_CASE("first move of the S4 loop and a non-pattern")
{
    const BraidMoveResult r = apply_braid_move(parse_word("123121"), 4);
    CHECK(r.word.str() == "123212");
    CHECK(r.wires == std::array<int, 3>{2, 3, 4});
    CHECK(code_of([] { apply_braid_move(parse_word("122"), 1); }) == ErrorCode::NotApplicable);
}

TEST_CASE("braid-move transformations of 121 written out")
{
    const Word w = parse_word("121");
    CHECK(normalize_transform(braid_move_transform(w, 1, QuiverFamily::Triangle)).steps ==
          normalized({Mutation{L("C:{2}")}, Automorphism::swap(L("C:{2}"), L("C:{1,3}"))}));
    CHECK(normalize_transform(braid_move_transform(w, 1, QuiverFamily::Square)).steps ==
          normalized({Mutation{L("S:2_2")}, Mutation{L("S:3_2")}, Mutation{L("S:1_2")}, Mutation{L("S:2_2")},
                      Automorphism::swap(L("S:1_2"), L("S:3_2"))}));
    CHECK(normalize_transform(braid_move_transform(w, 1, QuiverFamily::Butterfly)).steps ==
          normalized({Mutation{L("C:{2}")}, Mutation{L("X:12")}, Mutation{L("X:23")}, Mutation{L("X:13")},
                      Automorphism::swap(L("X:12"), L("X:23")), Automorphism::swap(L("C:{2}"), L("X:13")),
                      Automorphism::swap(L("C:{2}"), L("C:{1,3}"))}));
}

TEST_CASE("S4 loop mutation lists and trailing permutations in appendix aliases")
{
    auto alias_of = [](QuiverFamily f, const VertexLabel& l) { return appendix_aliases(f).at(l); };
    auto by_alias = [](QuiverFamily f, int a) {
        for (const auto& [l, v] : appendix_aliases(f))
            if (v == a) return l;
        FAIL("alias not found");
        return VertexLabel::plain(0);
    };
    const ClusterTransformation tri = loop_transform_s4(QuiverFamily::Triangle);
    std::vector<int> muts;
    for (const auto& s : tri.steps)
        if (const auto* m = std::get_if<Mutation>(&s)) muts.push_back(alias_of(QuiverFamily::Triangle, m->k));
    CHECK(muts == std::vector<int>{4, 7, 3, 4, 7, 3, 4, 7});
    const auto& a = std::get<Automorphism>(tri.steps.back());
    CHECK(a(by_alias(QuiverFamily::Triangle, 3)) == by_alias(QuiverFamily::Triangle, 4));
    CHECK(a(by_alias(QuiverFamily::Triangle, 4)) == by_alias(QuiverFamily::Triangle, 7));
    CHECK(a(by_alias(QuiverFamily::Triangle, 7)) == by_alias(QuiverFamily::Triangle, 3));
    CHECK(a.moved().size() == 3);

    const std::pair<QuiverFamily, std::vector<std::pair<int, int>>> swaps[] = {
        {QuiverFamily::Square, {{2, 12}, {3, 13}, {6, 7}, {8, 9}}},
        {QuiverFamily::Butterfly, {{3, 10}, {4, 6}, {5, 15}, {7, 12}}}};
    for (const auto& [f, pairs] : swaps) {
        const ClusterTransformation t = loop_transform_s4(f);
        CHECK(t.mutation_count() == 32);
        const auto& alpha = std::get<Automorphism>(t.steps.back());
        CHECK(alpha.moved().size() == 8);
        for (const auto& [x, y] : pairs) {
            CHECK(alpha(by_alias(f, x)) == by_alias(f, y));
            CHECK(alpha(by_alias(f, y)) == by_alias(f, x));
        }
    }
}
