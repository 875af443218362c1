#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "clustertet/family.hpp"
#include "clustertet/seed.hpp"

namespace clustertet {

// A word for a permutation in S_n: letter a is the adjacent transposition of
// levels a and a+1 (levels counted from the bottom).
struct Word {
    int n = 0;
    std::vector<int> letters;

    bool operator==(const Word&) const = default;
    std::string str() const;  // digits, e.g. "123121"; letters above 9 are comma separated
};

// Throws LetterOutOfRange unless every letter lies in [1, n-1].
Word make_word(int n, std::vector<int> letters);
// Parses "123121" (or "1,2,11" for large letters).  n defaults to max letter + 1.
Word parse_word(const std::string& text, int n = 0);

struct WordAnalysis {
    std::vector<int> permutation;  // permutation[level-1] = wire at that level on the right boundary
    int length = 0;                // letter count
    int inversions = 0;
    bool is_reduced = false;
    bool is_longest = false;
};

WordAnalysis analyze_word(const Word& w);

struct Crossing {
    int position = 0;  // 1-based letter index
    int level = 0;     // the letter: levels level and level+1 are exchanged
    int lower = 0;     // wire entering from the lower left
    int upper = 0;     // wire entering from the upper left
    VertexLabel label() const { return VertexLabel::crossing(lower, upper); }
};

// Column-gap grid: column c (0..k) is the vertical line after c letters, and
// gap g (0..n) is the region between levels g and g+1 of that column.
struct WiringDiagram {
    Word word;
    std::vector<std::vector<int>> order;        // order[c][level-1] = wire name
    std::vector<Crossing> crossings;            // one per letter
    std::vector<std::vector<std::vector<int>>> chamber_sets;  // [c][g] = wires below, sorted
    std::vector<std::vector<int>> segment_index;  // segment_index[c][wire-1] = position of wire's segment

    VertexLabel chamber(int column, int gap) const { return VertexLabel::chamber(chamber_sets[column][gap]); }
    VertexLabel segment(int column, int wire) const
    {
        return VertexLabel::segment(wire, segment_index[column][wire - 1]);
    }
    // Distinct chamber labels, segment labels and crossing labels in canonical order.
    std::vector<VertexLabel> chamber_labels() const;
    std::vector<VertexLabel> segment_labels() const;
    std::vector<VertexLabel> crossing_labels() const;
};

WiringDiagram build_diagram(const Word& w);

// Labels every cell of the column-gap grid by a breadth-first walk that starts
// from the bottom (from_top = false, label ∅) or top (label {1..n}) chamber of
// column 0, toggling a wire's name whenever the walk crosses it.  Throws
// DomainViolation if two walks reach one cell with different labels.
std::vector<std::vector<std::vector<int>>> chamber_walk(const WiringDiagram& d, bool from_top);

Seed build_quiver(const Word& w, QuiverFamily f);

struct BraidMoveResult {
    Word word;                 // rewritten word
    std::array<int, 3> wires;  // a < b < c
    bool inverse = false;      // pattern (a+1, a, a+1) was rewritten to (a, a+1, a)
};

// `at` is the 1-based position of the first of the three letters.
BraidMoveResult apply_braid_move(const Word& w, int at);

// Swaps letters at positions at, at+1 (1-based) when they differ by at least 2.
Word far_commute(const Word& w, int at);

ClusterTransformation braid_move_transform(const Word& w, int at, QuiverFamily f);

// One move in a path of words: a braid move (tagged with the expected wire
// triple) or a far-commutativity swap.
struct PathStep {
    enum class Kind { Braid, Commute };
    Kind kind;
    int at;
};

struct PathResult {
    Word final_word;
    // Normalized composite with padding vertices renamed canonically (see
    // rename_padding); raw_transform is the plain concatenation of the moves.
    ClusterTransformation transform;
    ClusterTransformation raw_transform;
    std::vector<std::string> moves;  // "β_234", "β_134^{-1}", "≡" ...
    std::vector<Word> words;         // every visited word, starting word first
};

// Labels drawn from the diagram itself (chambers, plus crossings for the
// butterfly family, or all segments for the square family); the remaining
// labels of build_quiver are isolated padding vertices.
std::vector<VertexLabel> realized_labels(const Word& w, QuiverFamily f);

// Padding vertices are isolated and never mutated, so the swaps of the braid
// moves only shuffle them among themselves.  This normalizes t and replaces
// the trailing automorphism on padding labels by the order-preserving
// bijection between the padding sets of source and target; the action on
// realized labels is kept.  Throws DomainViolation if the trailing
// automorphism does not map realized labels to realized labels.
ClusterTransformation rename_padding(const ClusterTransformation& t, const Word& source, const Word& target,
                                     QuiverFamily f);

PathResult follow_path(const Word& start, const std::vector<PathStep>& path, QuiverFamily f);

// The loop β_123^{-1}∘β_124^{-1}∘β_134^{-1}∘β_234^{-1}∘β_123∘β_124∘β_134∘β_234
// on reduced words for the longest element of S4, starting from 123121.
PathResult loop_path_s4(QuiverFamily f);
ClusterTransformation loop_transform_s4(QuiverFamily f);

// Both sides of the classical tetrahedron equation, each a transformation from
// the seed of 123121 (= 121321) to the seed of 321323 (= 323123):
// first = β_123∘β_124∘β_134∘β_234, second = β_234∘β_134∘β_124∘β_123.
std::pair<PathResult, PathResult> tetrahedron_sides(QuiverFamily f);

// All reduced words of the longest element of S_n, in lexicographic order.
std::vector<Word> reduced_words_longest(int n);

}  // namespace clustertet
