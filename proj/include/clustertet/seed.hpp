#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "clustertet/label.hpp"

namespace clustertet {

// Dense row-major integer matrix used for exchange matrices and the
// monomial-part matrices of module kernel.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}
    static IntMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    bool operator==(const IntMatrix& other) const = default;

    IntMatrix transpose() const;
    // Product with overflow detection (IntegerOverflow).
    IntMatrix operator*(const IntMatrix& rhs) const;

private:
    std::size_t n_ = 0;
    std::vector<std::int64_t> data_;
};

// Overflow-checked int64 arithmetic shared by the exact modules.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

// A seed (I, ε): an ordered label list and a skew-symmetric exchange matrix.
// An arrow j -> i is recorded as ε_ij > 0.  Values are immutable after
// construction.
class Seed {
public:
    Seed() = default;
    // Validates shape, label uniqueness and skew-symmetry.
    Seed(std::vector<VertexLabel> labels, IntMatrix epsilon);

    std::size_t size() const { return labels_.size(); }
    const std::vector<VertexLabel>& labels() const { return labels_; }
    const IntMatrix& epsilon() const { return eps_; }
    std::int64_t eps(std::size_t i, std::size_t j) const { return eps_(i, j); }
    std::int64_t eps(const VertexLabel& i, const VertexLabel& j) const;

    bool contains(const VertexLabel& label) const { return index_.count(label) != 0; }
    // Position of a label; throws UnknownVertex.
    std::size_t index_of(const VertexLabel& label) const;

    // Number of arrows, counted with multiplicity.
    std::int64_t arrow_count() const;

    // Seeds are equal when they have the same label set and the same ε entry
    // for every pair of labels; storage order is irrelevant.
    bool operator==(const Seed& other) const;

private:
    std::vector<VertexLabel> labels_;
    IntMatrix eps_;
    std::map<VertexLabel, std::size_t> index_;
};

Seed make_seed(std::vector<VertexLabel> labels, const std::vector<std::vector<std::int64_t>>& epsilon);

// Mutation target.
struct Mutation {
    VertexLabel k;
    bool operator==(const Mutation&) const = default;
};

// Relabeling α: the vertex named i is renamed α(i).  Only moved labels are
// stored; every other label is fixed.
class Automorphism {
public:
    Automorphism() = default;
    // Throws NotABijection unless the map permutes its own key set.
    explicit Automorphism(std::map<VertexLabel, VertexLabel> moved);
    static Automorphism swap(const VertexLabel& a, const VertexLabel& b);

    VertexLabel operator()(const VertexLabel& label) const;
    Automorphism inverse() const;
    // (this.then(next))(i) = next(this(i)).
    Automorphism then(const Automorphism& next) const;
    bool is_identity() const { return moved_.empty(); }
    const std::map<VertexLabel, VertexLabel>& moved() const { return moved_; }
    bool operator==(const Automorphism&) const = default;

private:
    std::map<VertexLabel, VertexLabel> moved_;
};

using TransformationStep = std::variant<Mutation, Automorphism>;

// Steps are applied in storage order.  Written as a composition of
// operators, the first stored step is the rightmost factor.
struct ClusterTransformation {
    std::vector<TransformationStep> steps;

    ClusterTransformation inverse() const;
    ClusterTransformation then(const ClusterTransformation& next) const;
    std::size_t mutation_count() const;
    // True for the shape (mutations..., exactly one trailing automorphism).
    bool is_normalized() const;
};

// Point on the A-, X- and D-tori (the D-torus coordinates are (X, B)).
// Entries are indexed like the labels of the seed the point belongs to.
struct TorusPoint {
    std::vector<double> A, X, B;
};

// Exchange-matrix mutation μ_k.
Seed mutate(const Seed& seed, const VertexLabel& k);
// ε'_{α(i)α(j)} = ε_ij.  Labels of the moved map must belong to the seed.
Seed permute(const Seed& seed, const Automorphism& alpha);

Seed apply_step(const Seed& seed, const TransformationStep& step);
std::pair<Seed, TorusPoint> apply_step(const Seed& seed, const TransformationStep& step, const TorusPoint& point);

Seed apply_transformation(const Seed& seed, const ClusterTransformation& t);
std::pair<Seed, TorusPoint> apply_transformation(const Seed& seed, const ClusterTransformation& t,
                                                 const TorusPoint& point);

// Moves every automorphism to the end using μ_k ∘ α = α ∘ μ_{α^{-1}(k)}.  The
// result always ends with exactly one (possibly identity) automorphism.
ClusterTransformation normalize_transform(const ClusterTransformation& t);

// Deterministic generator: std::mt19937_64 with doubles built from the top
// 53 bits, so sequences are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 42) : engine_(seed) {}
    double uniform(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

// Coordinates drawn uniformly from [0.5, 2.0].
TorusPoint random_point(std::size_t n, Rng& rng);

// Largest relative difference between two points over A, X and B.
double max_relative_error(const TorusPoint& a, const TorusPoint& b);

struct NumericComparison {
    bool equal = false;
    double max_rel_err = 0.0;
};

// Compares the actions of two transformations.  Throws SeedMismatch when the
// final seeds differ; otherwise compares pushed-forward points at `samples`
// random points.
NumericComparison transforms_equal_numeric(const Seed& seed, const ClusterTransformation& t1,
                                           const ClusterTransformation& t2, std::size_t samples,
                                           double tol, std::uint64_t rng_seed);

// Maximal deviation of the transported D-torus Poisson bracket under μ_k,
// using central differences of step h for the Jacobian of (X, B) -> (X', B').
double dtorus_poisson_defect(const Seed& seed, const VertexLabel& k, const TorusPoint& point, double h);

}  // namespace clustertet
