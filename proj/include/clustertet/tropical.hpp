#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clustertet/family.hpp"
#include "clustertet/seed.hpp"

namespace clustertet {

// Exponent vector of a tropical X-variable over the initial labels.
using TropicalMonomial = std::vector<std::int64_t>;

// monomials[i] belongs to the current label seed.labels()[i]; exponents are
// indexed by the positions of the initial seed's labels.
struct TropicalState {
    Seed seed;
    std::vector<TropicalMonomial> monomials;
};

TropicalState initial_tropical_state(const Seed& seed);

// +1 for nonnegative vectors (the zero vector included), -1 for nonpositive
// vectors with a negative entry; SignIncoherent for mixed signs.
int tropical_sign(const TropicalMonomial& m);

// Tropical X-mutation: X_k -> X_k^{-1} and X_i -> X_i X_k^{[sign(X_k) ε_ik]_+}.
TropicalState tropical_step(const TropicalState& state, const VertexLabel& k);
TropicalState tropical_permute(const TropicalState& state, const Automorphism& alpha);

struct GammaEntry {
    VertexLabel k;
    TropicalMonomial gamma;
    int sign = 1;
};

struct GammaTrace {
    std::vector<GammaEntry> entries;
    Automorphism trailing_perm;
};

struct TraceResult {
    ClusterTransformation normalized;
    // states[0] is the initial state, states[t] follows mutation t, and the
    // last entry follows the trailing automorphism.
    std::vector<TropicalState> states;
    GammaTrace gamma;
};

TraceResult trace_transformation(const Seed& seed, const ClusterTransformation& t);

// True iff the final ε equals the initial ε and every final tropical
// monomial is its own basis vector.  LabelSetChanged if the label sets differ.
bool is_trivial(const Seed& seed, const ClusterTransformation& t);

// Integer names 1..N used by the appendix tables for the seeds of 123121.
// Display-only: the wiring labels stay canonical.
const std::map<VertexLabel, int>& appendix_aliases(QuiverFamily f);

// One relation "X_i[t] = monomial" in a table row.
struct TableEntry {
    VertexLabel variable;
    int time = 0;
    TropicalMonomial exponents;
    bool final = false;  // last appearance of this variable in the table
};

struct TableRow {
    std::string step;  // "μ_4" or "α_{3,7}"
    std::vector<TableEntry> entries;
};

// Replays the normalized transformation, splitting the trailing permutation
// into transpositions (cycles taken by smallest display name; a cycle
// (c1 ... cm) becomes α_{c1,cm}, α_{c2,cm}, ..., α_{c(m-1),cm}) and listing the
// variables whose monomial changed at each step.
class TraceTable {
public:
    // aliases == nullptr selects wiring labels.
    TraceTable(const Seed& seed, const ClusterTransformation& t, const std::map<VertexLabel, int>* aliases);

    const std::vector<TableRow>& rows() const { return rows_; }
    std::string variable_name(const VertexLabel& label) const;
    std::string monomial_text(const TropicalMonomial& m) const;
    std::string entry_text(const TableEntry& e) const;

    std::string markdown() const;
    std::string csv() const;

private:
    std::vector<VertexLabel> initial_labels_;
    const std::map<VertexLabel, int>* aliases_;
    std::vector<TableRow> rows_;

    bool display_less(const VertexLabel& a, const VertexLabel& b) const;
};

}  // namespace clustertet
