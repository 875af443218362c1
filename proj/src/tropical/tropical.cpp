#include "clustertet/tropical.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "clustertet/error.hpp"
#include "clustertet/io.hpp"

namespace clustertet {

TropicalState initial_tropical_state(const Seed& seed)
{
    TropicalState s{seed, {}};
    s.monomials.assign(seed.size(), TropicalMonomial(seed.size(), 0));
    for (std::size_t i = 0; i < seed.size(); ++i) s.monomials[i][i] = 1;
    return s;
}

int tropical_sign(const TropicalMonomial& m)
{
    bool pos = false, neg = false;
    for (auto e : m) {
        pos = pos || e > 0;
        neg = neg || e < 0;
    }
    if (pos && neg) throw Error(ErrorCode::SignIncoherent, "tropical monomial has entries of both signs");
    return neg ? -1 : 1;
}

TropicalState tropical_step(const TropicalState& state, const VertexLabel& label)
{
    const std::size_t k = state.seed.index_of(label);
    const TropicalMonomial& mk = state.monomials[k];
    const int s = tropical_sign(mk);
    TropicalState next{mutate(state.seed, label), state.monomials};
    for (std::size_t i = 0; i < state.seed.size(); ++i) {
        if (i == k) continue;
        std::int64_t power = std::max<std::int64_t>(0, s * state.seed.eps(i, k));
        if (power == 0) continue;
        for (std::size_t j = 0; j < mk.size(); ++j)
            next.monomials[i][j] = checked_add(next.monomials[i][j], checked_mul(power, mk[j]));
    }
    for (auto& e : next.monomials[k]) e = -e;
    for (const auto& m : next.monomials) tropical_sign(m);
    return next;
}

TropicalState tropical_permute(const TropicalState& state, const Automorphism& alpha)
{
    TropicalState next{permute(state.seed, alpha), state.monomials};
    for (std::size_t i = 0; i < state.seed.size(); ++i)
        next.monomials[state.seed.index_of(alpha(state.seed.labels()[i]))] = state.monomials[i];
    return next;
}

TraceResult trace_transformation(const Seed& seed, const ClusterTransformation& t)
{
    TraceResult r;
    r.normalized = normalize_transform(t);
    r.states.push_back(initial_tropical_state(seed));
    for (const auto& step : r.normalized.steps) {
        const TropicalState& cur = r.states.back();
        if (const auto* m = std::get_if<Mutation>(&step)) {
            const TropicalMonomial& g = cur.monomials[cur.seed.index_of(m->k)];
            r.gamma.entries.push_back({m->k, g, tropical_sign(g)});
            r.states.push_back(tropical_step(cur, m->k));
        } else {
            r.gamma.trailing_perm = std::get<Automorphism>(step);
            r.states.push_back(tropical_permute(cur, r.gamma.trailing_perm));
        }
    }
    return r;
}

bool is_trivial(const Seed& seed, const ClusterTransformation& t)
{
    TraceResult r = trace_transformation(seed, t);
    const TropicalState& last = r.states.back();
    std::set<VertexLabel> before(seed.labels().begin(), seed.labels().end());
    std::set<VertexLabel> after(last.seed.labels().begin(), last.seed.labels().end());
    if (before != after) throw Error(ErrorCode::LabelSetChanged, "transformation changes the label set");
    if (!(last.seed == seed)) return false;
    for (std::size_t i = 0; i < seed.size(); ++i) {
        const auto& m = last.monomials[last.seed.index_of(seed.labels()[i])];
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m[j] != (i == j ? 1 : 0)) return false;
    }
    return true;
}

const std::map<VertexLabel, int>& appendix_aliases(QuiverFamily f)
{
    static const auto build = [](std::initializer_list<std::pair<const char*, int>> items) {
        std::map<VertexLabel, int> m;
        for (const auto& [label, alias] : items) m.emplace(VertexLabel::parse(label), alias);
        return m;
    };
    static const std::map<VertexLabel, int> triangle = build({
        {"C:{}", 1}, {"C:{1}", 2}, {"C:{2}", 3}, {"C:{3}", 4}, {"C:{4}", 5},
        {"C:{1,2}", 6}, {"C:{2,3}", 7}, {"C:{3,4}", 8}, {"C:{1,2,3}", 9}, {"C:{2,3,4}", 10},
    });
    static const std::map<VertexLabel, int> square = build({
        {"S:1_1", 1}, {"S:2_2", 2}, {"S:3_3", 3}, {"S:4_4", 4}, {"S:2_1", 5}, {"S:1_2", 6},
        {"S:3_2", 7}, {"S:2_3", 8}, {"S:4_3", 9}, {"S:3_4", 10}, {"S:3_1", 11}, {"S:1_3", 12},
        {"S:4_2", 13}, {"S:2_4", 14}, {"S:4_1", 15}, {"S:1_4", 16},
    });
    static const std::map<VertexLabel, int> butterfly = build({
        {"C:{}", 1}, {"C:{1}", 2}, {"X:12", 3}, {"C:{2}", 4}, {"X:23", 5}, {"C:{3}", 6},
        {"X:34", 7}, {"C:{4}", 8}, {"C:{1,2}", 9}, {"X:13", 10}, {"C:{2,3}", 11}, {"X:24", 12},
        {"C:{3,4}", 13}, {"C:{1,2,3}", 14}, {"X:14", 15}, {"C:{2,3,4}", 16}, {"C:{1,2,3,4}", 17},
    });
    switch (f) {
    case QuiverFamily::Triangle: return triangle;
    case QuiverFamily::Square: return square;
    case QuiverFamily::Butterfly: return butterfly;
    }
    return triangle;
}

bool TraceTable::display_less(const VertexLabel& a, const VertexLabel& b) const
{
    if (aliases_) {
        auto ia = aliases_->find(a), ib = aliases_->find(b);
        bool ha = ia != aliases_->end(), hb = ib != aliases_->end();
        if (ha && hb) return ia->second < ib->second;
        if (ha != hb) return ha;
    }
    return a < b;
}

std::string TraceTable::variable_name(const VertexLabel& label) const
{
    if (aliases_) {
        auto it = aliases_->find(label);
        if (it != aliases_->end()) return "X_" + std::to_string(it->second);
    }
    return "X_{" + label.display() + "}";
}

std::string TraceTable::monomial_text(const TropicalMonomial& m) const
{
    const int s = tropical_sign(m);
    std::vector<std::size_t> order(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [this](std::size_t x, std::size_t y) {
        return display_less(initial_labels_[x], initial_labels_[y]);
    });
    std::string body;
    for (std::size_t j : order) {
        std::int64_t e = s * m[j];
        if (e == 0) continue;
        body += variable_name(initial_labels_[j]);
        if (e > 1) body += "^" + std::to_string(e);
    }
    if (body.empty()) return "1";
    return s < 0 ? "1/" + body : body;
}

std::string TraceTable::entry_text(const TableEntry& e) const
{
    std::string text = variable_name(e.variable) + "[" + std::to_string(e.time) + "] = " + monomial_text(e.exponents);
    return e.final ? "**" + text + "**" : text;
}

TraceTable::TraceTable(const Seed& seed, const ClusterTransformation& t, const std::map<VertexLabel, int>* aliases)
    : initial_labels_(seed.labels()), aliases_(aliases)
{
    ClusterTransformation normalized = normalize_transform(t);
    TropicalState state = initial_tropical_state(seed);
    int time = 1;

    auto short_name = [this](const VertexLabel& l) {
        if (aliases_) {
            auto it = aliases_->find(l);
            if (it != aliases_->end()) return std::to_string(it->second);
        }
        return l.display();
    };
    auto record = [&](std::string step, const TropicalState& next) {
        ++time;
        TableRow row{std::move(step), {}};
        for (std::size_t i = 0; i < next.seed.size(); ++i) {
            const VertexLabel& label = next.seed.labels()[i];
            const auto& before = state.monomials[state.seed.index_of(label)];
            if (before != next.monomials[i]) row.entries.push_back({label, time, next.monomials[i], false});
        }
        std::sort(row.entries.begin(), row.entries.end(),
                  [this](const TableEntry& a, const TableEntry& b) { return display_less(a.variable, b.variable); });
        rows_.push_back(std::move(row));
        state = next;
    };

    for (const auto& step : normalized.steps) {
        if (const auto* m = std::get_if<Mutation>(&step)) {
            std::string name = short_name(m->k);
            if (name.size() > 1 && !(aliases_ && aliases_->count(m->k))) name = "{" + name + "}";
            record("μ_" + name, tropical_step(state, m->k));
            continue;
        }
        const Automorphism& alpha = std::get<Automorphism>(step);
        std::vector<VertexLabel> support;
        for (const auto& kv : alpha.moved()) support.push_back(kv.first);
        std::sort(support.begin(), support.end(),
                  [this](const VertexLabel& a, const VertexLabel& b) { return display_less(a, b); });
        std::set<VertexLabel> done;
        for (const auto& start : support) {
            if (done.count(start)) continue;
            std::vector<VertexLabel> cycle{start};
            done.insert(start);
            for (VertexLabel next = alpha(start); next != start; next = alpha(next)) {
                cycle.push_back(next);
                done.insert(next);
            }
            const VertexLabel& last = cycle.back();
            for (std::size_t j = 0; j + 1 < cycle.size(); ++j) {
                Automorphism swap = Automorphism::swap(cycle[j], last);
                record("α_{" + short_name(cycle[j]) + "," + short_name(last) + "}", tropical_permute(state, swap));
            }
        }
    }

    std::set<VertexLabel> seen;
    for (auto row = rows_.rbegin(); row != rows_.rend(); ++row)
        for (auto& e : row->entries) e.final = seen.insert(e.variable).second;
}

std::string TraceTable::markdown() const
{
    std::ostringstream out;
    out << "| step | changed variables |\n|---|---|\n";
    for (const auto& row : rows_) {
        out << "| " << row.step << " | ";
        for (std::size_t i = 0; i < row.entries.size(); ++i) out << (i ? ", " : "") << entry_text(row.entries[i]);
        out << " |\n";
    }
    return out.str();
}

std::string TraceTable::csv() const
{
    std::ostringstream out;
    out << "step,changed variables\r\n";
    for (const auto& row : rows_) {
        std::string joined;
        for (std::size_t i = 0; i < row.entries.size(); ++i) joined += (i ? ", " : "") + entry_text(row.entries[i]);
        out << csv_field(row.step) << ',' << csv_field(joined) << "\r\n";
    }
    return out.str();
}

}  // namespace clustertet
