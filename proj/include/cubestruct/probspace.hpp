#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "cubestruct/rational.hpp"

namespace cubestruct {

struct null_condition_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Finite sample space given by explicit atom weights summing to 1.
struct AtomSpace {
    std::vector<Rational> weights;

    explicit AtomSpace(std::vector<Rational> w);
    int atom_count() const { return static_cast<int>(weights.size()); }
};

using AtomSpacePtr = std::shared_ptr<const AtomSpace>;

/// A product of independent events, each of probability epsilon, with a
/// hash-consed boolean-formula algebra over them. Probabilities are computed
/// exactly by Shannon expansion on the lowest-index generator, memoized.
class BernoulliProduct {
public:
    explicit BernoulliProduct(Rational epsilon);

    const Rational& epsilon() const { return eps_; }
    /// Returns the generator's index, creating it if the name is new.
    int generator(const std::string& name);
    int find_generator(const std::string& name) const;  // -1 if absent
    int generator_count() const { return static_cast<int>(names_.size()); }
    const std::string& generator_name(int g) const { return names_.at(g); }

    int f_true() const { return 1; }
    int f_false() const { return 0; }
    int f_var(int g);
    int f_not(int a);
    int f_and(std::vector<int> children);
    int f_or(std::vector<int> children);

    Rational node_prob(int node);
    /// The formula with generator g fixed; nodes not mentioning g pass through.
    int restrict_node(int node, int g, bool value);
    bool eval_node(int node, const std::vector<bool>& assignment) const;

    enum class Kind { False, True, Var, Not, And, Or };
    Kind node_kind(int node) const { return nodes_[node].kind; }
    int node_var(int node) const { return nodes_[node].var; }
    const std::vector<int>& node_children(int node) const { return nodes_[node].children; }

private:
    struct Node {
        Kind kind;
        int var = -1;
        std::vector<int> children;
        int min_gen;  // lowest generator index appearing; INT_MAX for constants
    };

    int intern(Node n);

    Rational eps_;
    std::vector<std::string> names_;
    std::map<std::string, int> name_index_;
    std::vector<Node> nodes_;
    std::map<std::tuple<int, int, std::vector<int>>, int> cons_;
    std::map<int, Rational> prob_cache_;
    std::map<std::tuple<int, int, bool>, int> restrict_cache_;
};

using ProductPtr = std::shared_ptr<BernoulliProduct>;

/// An event in exactly one backend: an atom mask or a formula node.
struct Event {
    AtomSpacePtr space;
    std::vector<bool> mask;
    ProductPtr product;
    int node = -1;

    bool is_mask() const { return space != nullptr; }
};

Event mask_event(AtomSpacePtr space, std::vector<bool> mask);
Event formula_event(ProductPtr product, int node);

Rational prob(const Event& e);
Event event_not(const Event& e);
Event event_and(const Event& a, const Event& b);
Event event_or(const Event& a, const Event& b);
Event event_diff(const Event& a, const Event& b);
/// Empty conjunctions and disjunctions need a backend to name the space.
Event event_and(const ProductPtr& product, const std::vector<Event>& es);
Event event_or(const ProductPtr& product, const std::vector<Event>& es);

/// P(A | B); throws null_condition_error when P(B) = 0.
Rational conditional(const Event& A, const Event& B);

/// Extensional equality. Formula events compare via the symmetric difference
/// having probability zero, which coincides with set equality for epsilon in
/// (0,1); mask events compare masks.
bool events_equal(const Event& a, const Event& b);

/// Explicit product measure over a generator subset: b^g atoms for
/// epsilon = a/b, each generator realized as a mask.
struct Materialization {
    AtomSpacePtr space;
    std::vector<int> generators;
    std::vector<Event> generator_events;  // aligned with `generators`
    ProductPtr product;

    /// Re-express a formula event of the same product over the atoms.
    Event to_mask(const Event& formula_ev) const;
};

Materialization materialize(const ProductPtr& product, std::vector<int> generators,
                            int cap = 24);

}  // namespace cubestruct
