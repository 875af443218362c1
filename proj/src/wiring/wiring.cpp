#include "clustertet/wiring.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "clustertet/error.hpp"

namespace clustertet {

std::string Word::str() const
{
    bool wide = std::any_of(letters.begin(), letters.end(), [](int a) { return a > 9; });
    std::string out;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (wide && i) out += ',';
        out += std::to_string(letters[i]);
    }
    return out;
}

Word make_word(int n, std::vector<int> letters)
{
    if (n < 1) throw Error(ErrorCode::LetterOutOfRange, "a word needs at least one wire");
    for (int a : letters)
        if (a < 1 || a > n - 1)
            throw Error(ErrorCode::LetterOutOfRange,
                        "letter " + std::to_string(a) + " is outside [1, " + std::to_string(n - 1) + "]");
    return Word{n, std::move(letters)};
}

Word parse_word(const std::string& text, int n)
{
    std::vector<int> letters;
    if (text.find(',') != std::string::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            auto comma = text.find(',', start);
            std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            try {
                letters.push_back(std::stoi(piece));
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, "bad word '" + text + "'");
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } else {
        for (char ch : text) {
            if (ch < '0' || ch > '9') throw Error(ErrorCode::ParseError, "bad word '" + text + "'");
            letters.push_back(ch - '0');
        }
    }
    if (n <= 0) n = letters.empty() ? 2 : *std::max_element(letters.begin(), letters.end()) + 1;
    return make_word(n, std::move(letters));
}

WordAnalysis analyze_word(const Word& w)
{
    make_word(w.n, w.letters);
    WordAnalysis r;
    r.permutation.resize(w.n);
    std::iota(r.permutation.begin(), r.permutation.end(), 1);
    for (int a : w.letters) std::swap(r.permutation[a - 1], r.permutation[a]);
    r.length = static_cast<int>(w.letters.size());
    for (int i = 0; i < w.n; ++i)
        for (int j = i + 1; j < w.n; ++j)
            if (r.permutation[i] > r.permutation[j]) ++r.inversions;
    r.is_reduced = r.length == r.inversions;
    r.is_longest = true;
    for (int i = 0; i < w.n; ++i)
        if (r.permutation[i] != w.n - i) r.is_longest = false;
    return r;
}

WiringDiagram build_diagram(const Word& w)
{
    make_word(w.n, w.letters);
    WiringDiagram d;
    d.word = w;
    const std::size_t k = w.letters.size();
    std::vector<int> order(w.n);
    std::iota(order.begin(), order.end(), 1);
    std::vector<int> seg(w.n, 1);
    d.order.push_back(order);
    d.segment_index.push_back(seg);
    for (std::size_t t = 0; t < k; ++t) {
        int a = w.letters[t];
        Crossing c;
        c.position = static_cast<int>(t) + 1;
        c.level = a;
        c.lower = order[a - 1];
        c.upper = order[a];
        d.crossings.push_back(c);
        std::swap(order[a - 1], order[a]);
        ++seg[c.lower - 1];
        ++seg[c.upper - 1];
        d.order.push_back(order);
        d.segment_index.push_back(seg);
    }
    for (const auto& col : d.order) {
        std::vector<std::vector<int>> gaps;
        std::vector<int> below;
        gaps.push_back(below);
        for (int wire : col) {
            below.push_back(wire);
            std::vector<int> sorted = below;
            std::sort(sorted.begin(), sorted.end());
            gaps.push_back(sorted);
        }
        d.chamber_sets.push_back(std::move(gaps));
    }
    return d;
}

std::vector<VertexLabel> WiringDiagram::chamber_labels() const
{
    std::set<VertexLabel> labels;
    for (const auto& col : chamber_sets)
        for (const auto& s : col) labels.insert(VertexLabel::chamber(s));
    return {labels.begin(), labels.end()};
}

std::vector<VertexLabel> WiringDiagram::segment_labels() const
{
    std::set<VertexLabel> labels;
    for (std::size_t c = 0; c < segment_index.size(); ++c)
        for (int wire = 1; wire <= word.n; ++wire) labels.insert(segment(static_cast<int>(c), wire));
    return {labels.begin(), labels.end()};
}

std::vector<VertexLabel> WiringDiagram::crossing_labels() const
{
    std::set<VertexLabel> labels;
    for (const auto& c : crossings) labels.insert(c.label());
    return {labels.begin(), labels.end()};
}

std::vector<std::vector<std::vector<int>>> chamber_walk(const WiringDiagram& d, bool from_top)
{
    const int n = d.word.n;
    const int columns = static_cast<int>(d.order.size());
    std::vector<std::vector<std::optional<std::set<int>>>> seen(columns, std::vector<std::optional<std::set<int>>>(n + 1));
    std::deque<std::pair<int, int>> queue;
    std::set<int> start;
    if (from_top)
        for (int w = 1; w <= n; ++w) start.insert(w);
    int start_gap = from_top ? n : 0;
    seen[0][start_gap] = start;
    queue.emplace_back(0, start_gap);

    auto visit = [&](int c, int g, const std::set<int>& label) {
        if (seen[c][g]) {
            if (*seen[c][g] != label)
                throw Error(ErrorCode::DomainViolation, "chamber labels depend on the walk path");
            return;
        }
        seen[c][g] = label;
        queue.emplace_back(c, g);
    };
    while (!queue.empty()) {
        auto [c, g] = queue.front();
        queue.pop_front();
        const std::set<int> label = *seen[c][g];
        // Vertical moves cross the wire sitting on the level between two gaps.
        if (g < n) {
            auto up = label;
            int wire = d.order[c][g];
            if (!up.erase(wire)) up.insert(wire);
            visit(c, g + 1, up);
        }
        if (g > 0) {
            auto down = label;
            int wire = d.order[c][g - 1];
            if (!down.erase(wire)) down.insert(wire);
            visit(c, g - 1, down);
        }
        // A horizontal move is blocked only by the crossing sitting in this gap.
        if (c + 1 < columns && d.word.letters[c] != g) visit(c + 1, g, label);
        if (c > 0 && d.word.letters[c - 1] != g) visit(c - 1, g, label);
    }
    std::vector<std::vector<std::vector<int>>> out(columns, std::vector<std::vector<int>>(n + 1));
    for (int c = 0; c < columns; ++c)
        for (int g = 0; g <= n; ++g) {
            if (!seen[c][g]) throw Error(ErrorCode::DomainViolation, "unreachable chamber cell");
            out[c][g].assign(seen[c][g]->begin(), seen[c][g]->end());
        }
    return out;
}

namespace {

class ArrowAccumulator {
public:
    explicit ArrowAccumulator(std::vector<VertexLabel> labels) : labels_(std::move(labels)), eps_(labels_.size())
    {
        for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
    }
    // Arrow from -> to adds one to ε_{to,from}; opposite arrows cancel.
    void arrow(const VertexLabel& from, const VertexLabel& to)
    {
        std::size_t i = index_.at(to), j = index_.at(from);
        eps_(i, j) += 1;
        eps_(j, i) -= 1;
    }
    Seed seed() && { return Seed(std::move(labels_), std::move(eps_)); }

private:
    std::vector<VertexLabel> labels_;
    IntMatrix eps_;
    std::map<VertexLabel, std::size_t> index_;
};

std::vector<VertexLabel> all_subsets(int n)
{
    std::vector<VertexLabel> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> wires;
        for (int w = 1; w <= n; ++w)
            if (mask & (1u << (w - 1))) wires.push_back(w);
        out.push_back(VertexLabel::chamber(std::move(wires)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Seed build_quiver(const Word& w, QuiverFamily f)
{
    WiringDiagram d = build_diagram(w);
    std::vector<VertexLabel> labels;
    if (f == QuiverFamily::Square) {
        labels = d.segment_labels();
    } else {
        labels = all_subsets(w.n);
        if (f == QuiverFamily::Butterfly)
            for (const auto& x : d.crossing_labels()) labels.push_back(x);
    }
    ArrowAccumulator acc(std::move(labels));
    for (const auto& c : d.crossings) {
        const int before = c.position - 1, after = c.position;
        if (f == QuiverFamily::Square) {
            VertexLabel pi = d.segment(before, c.lower), pn = d.segment(after, c.lower);
            VertexLabel qj = d.segment(before, c.upper), qn = d.segment(after, c.upper);
            acc.arrow(pi, qj);
            acc.arrow(qj, pn);
            acc.arrow(pn, qn);
            acc.arrow(qn, pi);
            continue;
        }
        VertexLabel bottom = d.chamber(before, c.level - 1);
        VertexLabel left = d.chamber(before, c.level);
        VertexLabel right = d.chamber(after, c.level);
        VertexLabel top = d.chamber(before, c.level + 1);
        if (f == QuiverFamily::Triangle) {
            acc.arrow(bottom, left);
            acc.arrow(left, right);
            acc.arrow(right, bottom);
        } else {
            VertexLabel x = c.label();
            acc.arrow(bottom, left);
            acc.arrow(x, bottom);
            acc.arrow(left, x);
            acc.arrow(right, x);
            acc.arrow(x, top);
            acc.arrow(top, right);
        }
    }
    return std::move(acc).seed();
}

BraidMoveResult apply_braid_move(const Word& w, int at)
{
    make_word(w.n, w.letters);
    if (at < 1 || at + 2 > static_cast<int>(w.letters.size()))
        throw Error(ErrorCode::NotApplicable, "braid move position " + std::to_string(at) + " is out of range");
    const int x = w.letters[at - 1], y = w.letters[at], z = w.letters[at + 1];
    BraidMoveResult r;
    r.word = w;
    int base = 0;  // lowest level touched by the move
    if (x == z && y == x + 1) {
        base = x;
        r.word.letters[at - 1] = y;
        r.word.letters[at] = x;
        r.word.letters[at + 1] = y;
    } else if (x == z && y == x - 1) {
        base = y;
        r.inverse = true;
        r.word.letters[at - 1] = y;
        r.word.letters[at] = x;
        r.word.letters[at + 1] = y;
    } else {
        throw Error(ErrorCode::NotApplicable, "letters at position " + std::to_string(at) + " of " + w.str() +
                                                  " do not form a braid pattern");
    }
    WiringDiagram d = build_diagram(w);
    const auto& col = d.order[at - 1];
    r.wires = {col[base - 1], col[base], col[base + 1]};
    std::sort(r.wires.begin(), r.wires.end());
    return r;
}

Word far_commute(const Word& w, int at)
{
    make_word(w.n, w.letters);
    if (at < 1 || at + 1 > static_cast<int>(w.letters.size()))
        throw Error(ErrorCode::NotApplicable, "commutation position out of range");
    if (std::abs(w.letters[at - 1] - w.letters[at]) < 2)
        throw Error(ErrorCode::NotApplicable, "letters at position " + std::to_string(at) + " do not commute");
    Word out = w;
    std::swap(out.letters[at - 1], out.letters[at]);
    return out;
}

namespace {

// Decomposition of the move (a, a+1, a) -> (a+1, a, a+1) read off the
// source diagram; roles a, b, c are the wires on the bottom, middle and top
// levels entering the move.
ClusterTransformation forward_move(const Word& w, int at, QuiverFamily f)
{
    WiringDiagram d = build_diagram(w);
    const int x = w.letters[at - 1];
    const int c0 = at - 1;
    const int a = d.order[c0][x - 1], b = d.order[c0][x], c = d.order[c0][x + 1];
    std::vector<int> base = d.chamber_sets[c0][x - 1];
    auto with = [&base](std::initializer_list<int> extra) {
        std::vector<int> s = base;
        s.insert(s.end(), extra);
        return VertexLabel::chamber(std::move(s));
    };
    ClusterTransformation t;
    switch (f) {
    case QuiverFamily::Triangle: {
        VertexLabel cb = with({b});
        t.steps.emplace_back(Mutation{cb});
        t.steps.emplace_back(Automorphism::swap(cb, with({a, c})));
        break;
    }
    case QuiverFamily::Square: {
        VertexLabel ap = d.segment(c0 + 1, a), br = d.segment(c0 + 1, b), cq = d.segment(c0 + 2, c);
        t.steps.emplace_back(Mutation{br});
        t.steps.emplace_back(Mutation{cq});
        t.steps.emplace_back(Mutation{ap});
        t.steps.emplace_back(Mutation{br});
        t.steps.emplace_back(Automorphism::swap(ap, cq));
        break;
    }
    case QuiverFamily::Butterfly: {
        VertexLabel cb = with({b});
        VertexLabel ab = VertexLabel::crossing(a, b), bc = VertexLabel::crossing(b, c),
                    ac = VertexLabel::crossing(a, c);
        t.steps.emplace_back(Mutation{cb});
        t.steps.emplace_back(Mutation{ab});
        t.steps.emplace_back(Mutation{bc});
        t.steps.emplace_back(Mutation{ac});
        t.steps.emplace_back(Automorphism::swap(ab, bc));
        t.steps.emplace_back(Automorphism::swap(cb, ac));
        t.steps.emplace_back(Automorphism::swap(cb, with({a, c})));
        break;
    }
    }
    return t;
}

}  // namespace

ClusterTransformation braid_move_transform(const Word& w, int at, QuiverFamily f)
{
    BraidMoveResult r = apply_braid_move(w, at);
    if (!r.inverse) return forward_move(w, at, f);
    // The reverse move is the inverse of the forward move out of the target.
    return forward_move(r.word, at, f).inverse();
}

std::vector<VertexLabel> realized_labels(const Word& w, QuiverFamily f)
{
    WiringDiagram d = build_diagram(w);
    if (f == QuiverFamily::Square) return d.segment_labels();
    std::vector<VertexLabel> labels = d.chamber_labels();
    if (f == QuiverFamily::Butterfly)
        for (const auto& x : d.crossing_labels()) labels.push_back(x);
    return labels;
}

ClusterTransformation rename_padding(const ClusterTransformation& t, const Word& source, const Word& target,
                                     QuiverFamily f)
{
    ClusterTransformation out = normalize_transform(t);
    const Automorphism alpha = std::get<Automorphism>(out.steps.back());
    const Seed full = build_quiver(source, f);
    const auto realized_source = realized_labels(source, f);
    const auto realized_target = realized_labels(target, f);
    const std::set<VertexLabel> rs(realized_source.begin(), realized_source.end());
    const std::set<VertexLabel> rt(realized_target.begin(), realized_target.end());
    std::vector<VertexLabel> pad_source, pad_target;
    for (const auto& l : full.labels()) {
        if (!rs.count(l)) pad_source.push_back(l);
        if (!rt.count(l)) pad_target.push_back(l);
    }
    if (pad_source.size() != pad_target.size())
        throw Error(ErrorCode::DomainViolation, "source and target have different numbers of padding vertices");
    std::map<VertexLabel, VertexLabel> moved;
    for (const auto& l : realized_source) {
        if (!rt.count(alpha(l)))
            throw Error(ErrorCode::DomainViolation, "trailing automorphism sends realized " + l.str() + " to padding");
        moved.emplace(l, alpha(l));
    }
    for (std::size_t i = 0; i < pad_source.size(); ++i) moved.emplace(pad_source[i], pad_target[i]);
    out.steps.back() = Automorphism(std::move(moved));
    return out;
}

PathResult follow_path(const Word& start, const std::vector<PathStep>& path, QuiverFamily f)
{
    PathResult out;
    out.final_word = start;
    out.words.push_back(start);
    for (const auto& step : path) {
        if (step.kind == PathStep::Kind::Commute) {
            out.final_word = far_commute(out.final_word, step.at);
            out.moves.push_back("≡");
        } else {
            BraidMoveResult r = apply_braid_move(out.final_word, step.at);
            out.raw_transform = out.raw_transform.then(braid_move_transform(out.final_word, step.at, f));
            std::string name = "β_" + std::to_string(r.wires[0]) + std::to_string(r.wires[1]) +
                               std::to_string(r.wires[2]);
            if (r.inverse) name += "^{-1}";
            out.moves.push_back(name);
            out.final_word = r.word;
        }
        out.words.push_back(out.final_word);
    }
    out.transform = rename_padding(out.raw_transform, start, out.final_word, f);
    return out;
}

PathResult loop_path_s4(QuiverFamily f)
{
    using K = PathStep::Kind;
    const std::vector<PathStep> path = {
        {K::Braid, 4},                    // 123121 -> 123212
        {K::Braid, 2},                    // -> 132312
        {K::Commute, 1}, {K::Commute, 4},  // -> 312132
        {K::Braid, 2},                    // -> 321232
        {K::Braid, 4},                    // -> 321323
        {K::Commute, 3},                  // -> 323123
        {K::Braid, 1},                    // -> 232123
        {K::Braid, 3},                    // -> 231213
        {K::Commute, 2}, {K::Commute, 5},  // -> 213231
        {K::Braid, 3},                    // -> 212321
        {K::Braid, 1},                    // -> 121321
        {K::Commute, 3},                  // -> 123121
    };
    return follow_path(parse_word("123121"), path, f);
}

ClusterTransformation loop_transform_s4(QuiverFamily f)
{
    return loop_path_s4(f).transform;
}

std::pair<PathResult, PathResult> tetrahedron_sides(QuiverFamily f)
{
    using K = PathStep::Kind;
    const std::vector<PathStep> first = {
        {K::Braid, 4}, {K::Braid, 2}, {K::Commute, 1}, {K::Commute, 4}, {K::Braid, 2}, {K::Braid, 4},
    };
    const std::vector<PathStep> second = {
        {K::Commute, 3},                  // 123121 -> 121321
        {K::Braid, 1},                    // -> 212321
        {K::Braid, 3},                    // -> 213231
        {K::Commute, 5}, {K::Commute, 2},  // -> 231213
        {K::Braid, 3},                    // -> 232123
        {K::Braid, 1},                    // -> 323123
        {K::Commute, 3},                  // -> 321323
    };
    Word start = parse_word("123121");
    return {follow_path(start, first, f), follow_path(start, second, f)};
}

std::vector<Word> reduced_words_longest(int n)
{
    std::vector<Word> out;
    const int target = n * (n - 1) / 2;
    std::vector<int> letters, order(n);
    std::iota(order.begin(), order.end(), 1);
    auto extend = [&](auto&& self) -> void {
        if (static_cast<int>(letters.size()) == target) {
            out.push_back(Word{n, letters});
            return;
        }
        for (int a = 1; a < n; ++a) {
            if (order[a - 1] > order[a]) continue;  // would undo an inversion
            std::swap(order[a - 1], order[a]);
            letters.push_back(a);
            self(self);
            letters.pop_back();
            std::swap(order[a - 1], order[a]);
        }
    };
    extend(extend);
    return out;
}

}  // namespace clustertet
