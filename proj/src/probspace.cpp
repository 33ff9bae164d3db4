#include "cubestruct/probspace.hpp"

#include <algorithm>
#include <climits>
#include <set>

namespace cubestruct {

AtomSpace::AtomSpace(std::vector<Rational> w) : weights(std::move(w)) {
    if (weights.empty()) throw std::invalid_argument("atom space needs atoms");
    Rational total = 0;
    for (const Rational& q : weights) {
        if (q < 0) throw std::invalid_argument("negative atom weight");
        total += q;
    }
    if (total != 1) throw std::invalid_argument("atom weights must sum to 1");
}

BernoulliProduct::BernoulliProduct(Rational epsilon) : eps_(std::move(epsilon)) {
    if (eps_ <= 0 || eps_ > 1)
        throw std::invalid_argument("epsilon must lie in (0,1]");
    nodes_.push_back(Node{Kind::False, -1, {}, INT_MAX});
    nodes_.push_back(Node{Kind::True, -1, {}, INT_MAX});
}

int BernoulliProduct::generator(const std::string& name) {
    auto it = name_index_.find(name);
    if (it != name_index_.end()) return it->second;
    int g = generator_count();
    names_.push_back(name);
    name_index_[name] = g;
    return g;
}

int BernoulliProduct::find_generator(const std::string& name) const {
    auto it = name_index_.find(name);
    return it == name_index_.end() ? -1 : it->second;
}

int BernoulliProduct::intern(Node n) {
    std::tuple<int, int, std::vector<int>> key{static_cast<int>(n.kind), n.var,
                                               n.children};
    auto it = cons_.find(key);
    if (it != cons_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    cons_.emplace(std::move(key), id);
    return id;
}

int BernoulliProduct::f_var(int g) {
    if (g < 0 || g >= generator_count())
        throw std::invalid_argument("unknown generator index");
    return intern(Node{Kind::Var, g, {}, g});
}

int BernoulliProduct::f_not(int a) {
    if (a == 0) return 1;
    if (a == 1) return 0;
    if (nodes_[a].kind == Kind::Not) return nodes_[a].children[0];
    return intern(Node{Kind::Not, -1, {a}, nodes_[a].min_gen});
}

int BernoulliProduct::f_and(std::vector<int> children) {
    std::vector<int> flat;
    for (int c : children) {
        if (c == 0) return 0;
        if (c == 1) continue;
        if (nodes_[c].kind == Kind::And)
            flat.insert(flat.end(), nodes_[c].children.begin(), nodes_[c].children.end());
        else
            flat.push_back(c);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return 1;
    if (flat.size() == 1) return flat[0];
    int mg = INT_MAX;
    for (int c : flat) mg = std::min(mg, nodes_[c].min_gen);
    return intern(Node{Kind::And, -1, std::move(flat), mg});
}

int BernoulliProduct::f_or(std::vector<int> children) {
    std::vector<int> flat;
    for (int c : children) {
        if (c == 1) return 1;
        if (c == 0) continue;
        if (nodes_[c].kind == Kind::Or)
            flat.insert(flat.end(), nodes_[c].children.begin(), nodes_[c].children.end());
        else
            flat.push_back(c);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return 0;
    if (flat.size() == 1) return flat[0];
    int mg = INT_MAX;
    for (int c : flat) mg = std::min(mg, nodes_[c].min_gen);
    return intern(Node{Kind::Or, -1, std::move(flat), mg});
}

int BernoulliProduct::restrict_node(int node, int g, bool value) {
    if (nodes_[node].min_gen > g) return node;
    std::tuple<int, int, bool> key{node, g, value};
    auto it = restrict_cache_.find(key);
    if (it != restrict_cache_.end()) return it->second;
    const Node& n = nodes_[node];
    int r;
    switch (n.kind) {
        case Kind::Var:
            r = n.var == g ? (value ? 1 : 0) : node;
            break;
        case Kind::Not:
            r = f_not(restrict_node(n.children[0], g, value));
            break;
        case Kind::And:
        case Kind::Or: {
            std::vector<int> cs;
            cs.reserve(n.children.size());
            for (int c : n.children) cs.push_back(restrict_node(c, g, value));
            r = n.kind == Kind::And ? f_and(std::move(cs)) : f_or(std::move(cs));
            break;
        }
        default:
            r = node;
    }
    restrict_cache_.emplace(key, r);
    return r;
}

Rational BernoulliProduct::node_prob(int node) {
    if (node == 0) return 0;
    if (node == 1) return 1;
    auto it = prob_cache_.find(node);
    if (it != prob_cache_.end()) return it->second;
    // Shannon expansion on the lowest generator appearing in the formula
    int g = nodes_[node].min_gen;
    Rational p = eps_ * node_prob(restrict_node(node, g, true)) +
                 (1 - eps_) * node_prob(restrict_node(node, g, false));
    prob_cache_.emplace(node, p);
    return p;
}

bool BernoulliProduct::eval_node(int node, const std::vector<bool>& assignment) const {
    const Node& n = nodes_[node];
    switch (n.kind) {
        case Kind::False: return false;
        case Kind::True: return true;
        case Kind::Var: return assignment.at(n.var);
        case Kind::Not: return !eval_node(n.children[0], assignment);
        case Kind::And:
            for (int c : n.children)
                if (!eval_node(c, assignment)) return false;
            return true;
        case Kind::Or:
            for (int c : n.children)
                if (eval_node(c, assignment)) return true;
            return false;
    }
    return false;
}

Event mask_event(AtomSpacePtr space, std::vector<bool> mask) {
    if (static_cast<int>(mask.size()) != space->atom_count())
        throw std::invalid_argument("mask length differs from atom count");
    Event e;
    e.space = std::move(space);
    e.mask = std::move(mask);
    return e;
}

Event formula_event(ProductPtr product, int node) {
    Event e;
    e.product = std::move(product);
    e.node = node;
    return e;
}

namespace {

void require_same_mask_space(const Event& a, const Event& b) {
    if (a.space.get() != b.space.get())
        throw std::invalid_argument("events belong to different atom spaces");
}

void require_same_product(const Event& a, const Event& b) {
    if (a.product.get() != b.product.get())
        throw std::invalid_argument("events belong to different products");
}

void require_same_backend(const Event& a, const Event& b) {
    if (a.is_mask() != b.is_mask())
        throw std::invalid_argument("mixed event backends; materialize first");
    if (a.is_mask()) require_same_mask_space(a, b);
    else require_same_product(a, b);
}

}  // namespace

Rational prob(const Event& e) {
    if (e.is_mask()) {
        Rational p = 0;
        for (int i = 0; i < e.space->atom_count(); ++i)
            if (e.mask[i]) p += e.space->weights[i];
        return p;
    }
    return e.product->node_prob(e.node);
}

Event event_not(const Event& e) {
    if (e.is_mask()) {
        std::vector<bool> m = e.mask;
        m.flip();
        return mask_event(e.space, std::move(m));
    }
    return formula_event(e.product, e.product->f_not(e.node));
}

Event event_and(const Event& a, const Event& b) {
    require_same_backend(a, b);
    if (a.is_mask()) {
        std::vector<bool> m(a.mask.size());
        for (size_t i = 0; i < m.size(); ++i) m[i] = a.mask[i] && b.mask[i];
        return mask_event(a.space, std::move(m));
    }
    return formula_event(a.product, a.product->f_and({a.node, b.node}));
}

Event event_or(const Event& a, const Event& b) {
    require_same_backend(a, b);
    if (a.is_mask()) {
        std::vector<bool> m(a.mask.size());
        for (size_t i = 0; i < m.size(); ++i) m[i] = a.mask[i] || b.mask[i];
        return mask_event(a.space, std::move(m));
    }
    return formula_event(a.product, a.product->f_or({a.node, b.node}));
}

Event event_diff(const Event& a, const Event& b) {
    return event_and(a, event_not(b));
}

Event event_and(const ProductPtr& product, const std::vector<Event>& es) {
    std::vector<int> nodes;
    for (const Event& e : es) {
        if (e.is_mask() || e.product.get() != product.get())
            throw std::invalid_argument("conjunction over a foreign event");
        nodes.push_back(e.node);
    }
    return formula_event(product, product->f_and(std::move(nodes)));
}

Event event_or(const ProductPtr& product, const std::vector<Event>& es) {
    std::vector<int> nodes;
    for (const Event& e : es) {
        if (e.is_mask() || e.product.get() != product.get())
            throw std::invalid_argument("disjunction over a foreign event");
        nodes.push_back(e.node);
    }
    return formula_event(product, product->f_or(std::move(nodes)));
}

Rational conditional(const Event& A, const Event& B) {
    Rational pb = prob(B);
    if (pb == 0) throw null_condition_error("conditioning on a null event");
    return prob(event_and(A, B)) / pb;
}

bool events_equal(const Event& a, const Event& b) {
    require_same_backend(a, b);
    if (a.is_mask()) return a.mask == b.mask;
    if (a.node == b.node) return true;
    // symmetric difference null; exact set equality since atoms have
    // positive weight for epsilon in (0,1)
    return prob(event_or(event_diff(a, b), event_diff(b, a))) == 0;
}

namespace {

void collect_vars(const BernoulliProduct& p, int node, std::set<int>& vars,
                  std::set<int>& visited) {
    if (!visited.insert(node).second) return;
    if (p.node_kind(node) == BernoulliProduct::Kind::Var) {
        vars.insert(p.node_var(node));
        return;
    }
    for (int c : p.node_children(node)) collect_vars(p, c, vars, visited);
}

}  // namespace

Event Materialization::to_mask(const Event& formula_ev) const {
    if (formula_ev.is_mask() || formula_ev.product.get() != product.get())
        throw std::invalid_argument("to_mask: foreign event");
    std::set<int> vars, visited;
    collect_vars(*product, formula_ev.node, vars, visited);
    std::set<int> listed(generators.begin(), generators.end());
    for (int v : vars)
        if (!listed.count(v))
            throw std::invalid_argument("to_mask: formula mentions an unmaterialized generator");
    int g = static_cast<int>(generators.size());
    long long b = static_cast<long long>(denominator(product->epsilon()));
    long long a = static_cast<long long>(numerator(product->epsilon()));
    std::vector<bool> mask(space->atom_count());
    std::vector<bool> assignment(product->generator_count(), false);
    for (int atom = 0; atom < space->atom_count(); ++atom) {
        long long r = atom;
        for (int j = g - 1; j >= 0; --j) {
            assignment[generators[j]] = (r % b) < a;
            r /= b;
        }
        mask[atom] = product->eval_node(formula_ev.node, assignment);
    }
    return mask_event(space, std::move(mask));
}

Materialization materialize(const ProductPtr& product, std::vector<int> generators,
                            int cap) {
    int g = static_cast<int>(generators.size());
    if (g > cap) throw std::invalid_argument("materialization cap exceeded");
    for (int v : generators)
        if (v < 0 || v >= product->generator_count())
            throw std::invalid_argument("unknown generator index");
    long long b = static_cast<long long>(denominator(product->epsilon()));
    long long a = static_cast<long long>(numerator(product->epsilon()));
    long long atoms = 1;
    for (int i = 0; i < g; ++i) {
        atoms *= b;
        if (atoms > (1LL << 24)) throw std::invalid_argument("materialization too large");
    }
    Rational w(1, BigInt(atoms));
    auto space = std::make_shared<const AtomSpace>(
        std::vector<Rational>(atoms, w));
    Materialization m;
    m.space = space;
    m.generators = generators;
    m.product = product;
    for (int j = 0; j < g; ++j) {
        std::vector<bool> mask(atoms);
        long long stride = 1;
        for (int q = g - 1; q > j; --q) stride *= b;
        for (long long atom = 0; atom < atoms; ++atom)
            mask[atom] = (atom / stride) % b < a;
        m.generator_events.push_back(mask_event(space, std::move(mask)));
    }
    return m;
}

}  // namespace cubestruct
