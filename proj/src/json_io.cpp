#include "cubestruct/json_io.hpp"

#include <stdexcept>

namespace cubestruct {

namespace {

bool is_reserved_token(const std::string& t) {
    if (t.size() < 2 || t[0] != 'x') return false;
    for (size_t i = 1; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return t[1] != '0';
}

[[noreturn]] void malformed(const std::string& what) {
    throw std::invalid_argument("malformed " + what);
}

}  // namespace

Json word_to_json(const Alphabet& a, const Word& w) {
    Json arr = Json::array();
    for (Symbol s : w.letters) arr.push_back(a.token(s));
    return arr;
}

Word word_from_json(const AlphabetPtr& a, const Json& j) {
    if (!j.is_array()) malformed("word");
    Word w;
    for (const Json& t : j) {
        if (!t.is_string()) malformed("word");
        w.letters.push_back(a->index_of(t.get<std::string>()));
    }
    return w;
}

Json variable_word_to_json(const VariableWord& v) {
    Json arr = Json::array();
    for (int e : v.entries)
        arr.push_back(e < v.k() ? v.alphabet->token(e)
                                : "x" + std::to_string(e - v.k() + 1));
    return arr;
}

VariableWord variable_word_from_json(const AlphabetPtr& a, const Json& j) {
    if (!j.is_array()) malformed("variable word");
    std::vector<int> entries;
    for (const Json& t : j) {
        if (!t.is_string()) malformed("variable word");
        std::string tok = t.get<std::string>();
        if (is_reserved_token(tok))
            entries.push_back(a->k() + std::stoi(tok.substr(1)) - 1);
        else
            entries.push_back(a->index_of(tok));
    }
    return VariableWord(a, std::move(entries));
}

Json formula_to_json(const BernoulliProduct& product, int node) {
    using Kind = BernoulliProduct::Kind;
    switch (product.node_kind(node)) {
        case Kind::False: return "false";
        case Kind::True: return "true";
        case Kind::Var: return Json{{"gen", product.generator_name(product.node_var(node))}};
        case Kind::Not:
            return Json{{"not", formula_to_json(product, product.node_children(node)[0])}};
        case Kind::And:
        case Kind::Or: {
            Json arr = Json::array();
            for (int c : product.node_children(node))
                arr.push_back(formula_to_json(product, c));
            const char* key = product.node_kind(node) == Kind::And ? "and" : "or";
            return Json{{key, std::move(arr)}};
        }
    }
    malformed("formula node");
}

int formula_from_json(BernoulliProduct& product, const Json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "true") return product.f_true();
        if (s == "false") return product.f_false();
        malformed("formula constant '" + s + "'");
    }
    if (!j.is_object() || j.size() != 1) malformed("formula");
    const auto& [key, value] = *j.items().begin();
    if (key == "gen") {
        if (!value.is_string()) malformed("generator reference");
        return product.f_var(product.generator(value.get<std::string>()));
    }
    if (key == "not") return product.f_not(formula_from_json(product, value));
    if (key == "and" || key == "or") {
        if (!value.is_array()) malformed("formula junction");
        std::vector<int> children;
        for (const Json& c : value) children.push_back(formula_from_json(product, c));
        return key == "and" ? product.f_and(std::move(children))
                            : product.f_or(std::move(children));
    }
    malformed("formula key '" + key + "'");
}

Json event_to_json(const Event& e) {
    if (e.is_mask()) {
        Json arr = Json::array();
        for (bool b : e.mask) arr.push_back(b ? 1 : 0);
        return arr;
    }
    return formula_to_json(*e.product, e.node);
}

AlphabetPtr alphabet_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) malformed("alphabet");
    std::vector<std::string> tokens;
    for (const Json& t : j) {
        if (!t.is_string()) malformed("alphabet");
        std::string tok = t.get<std::string>();
        if (is_reserved_token(tok))
            throw std::invalid_argument("alphabet token '" + tok + "' is reserved");
        tokens.push_back(std::move(tok));
    }
    return std::make_shared<const Alphabet>(std::move(tokens));
}

Json process_to_json(const CubeProcess& proc) {
    Json j;
    Json alpha = Json::array();
    for (const std::string& t : proc.alphabet->symbols) alpha.push_back(t);
    j["alphabet"] = std::move(alpha);
    j["n"] = proc.n;
    if (proc.product) {
        Json gens = Json::array();
        for (int g = 0; g < proc.product->generator_count(); ++g)
            gens.push_back(proc.product->generator_name(g));
        j["space"] = Json{{"kind", "bernoulli"},
                          {"epsilon", rat_str(proc.product->epsilon())},
                          {"generators", std::move(gens)}};
    } else {
        if (proc.events.empty()) malformed("process (no events)");
        Json weights = Json::array();
        for (const Rational& w : proc.events.front().space->weights)
            weights.push_back(rat_str(w));
        j["space"] = Json{{"kind", "atoms"}, {"weights", std::move(weights)}};
    }
    Json events = Json::array();
    for (const Event& e : proc.events) events.push_back(event_to_json(e));
    j["events"] = std::move(events);
    return j;
}

CubeProcess process_from_json(const Json& j) {
    if (!j.is_object()) malformed("process");
    AlphabetPtr alphabet = alphabet_from_json(j.at("alphabet"));
    int n = j.at("n").get<int>();
    if (n < 0) malformed("process length");
    const Json& space = j.at("space");
    std::string kind = space.at("kind").get<std::string>();
    const Json& events = j.at("events");
    if (!events.is_array()) malformed("event list");

    std::vector<Event> es;
    ProductPtr product;
    if (kind == "bernoulli") {
        product = std::make_shared<BernoulliProduct>(
            parse_rational(space.at("epsilon").get<std::string>()));
        if (space.contains("generators"))
            for (const Json& g : space.at("generators"))
                product->generator(g.get<std::string>());
        for (const Json& e : events)
            es.push_back(formula_event(product, formula_from_json(*product, e)));
    } else if (kind == "atoms") {
        std::vector<Rational> weights;
        for (const Json& w : space.at("weights"))
            weights.push_back(parse_rational(w.get<std::string>()));
        auto atoms = std::make_shared<const AtomSpace>(std::move(weights));
        for (const Json& e : events) {
            if (!e.is_array() || static_cast<int>(e.size()) != atoms->atom_count())
                malformed("mask event");
            std::vector<bool> mask;
            for (const Json& b : e) mask.push_back(b.get<int>() != 0);
            es.push_back(mask_event(atoms, std::move(mask)));
        }
    } else {
        malformed("space kind '" + kind + "'");
    }
    return make_process(std::move(alphabet), n, std::move(product), std::move(es));
}

Json dense_set_to_json(const DenseSet& D) {
    Json members = Json::array();
    for (const Word& w : D.members) members.push_back(word_to_json(*D.alphabet, w));
    Json alpha = Json::array();
    for (const std::string& t : D.alphabet->symbols) alpha.push_back(t);
    return Json{{"alphabet", std::move(alpha)}, {"n", D.n}, {"members", std::move(members)}};
}

DenseSet dense_set_from_json(const Json& j) {
    if (!j.is_object()) malformed("dense set");
    AlphabetPtr alphabet = alphabet_from_json(j.at("alphabet"));
    int n = j.at("n").get<int>();
    std::set<Word> members;
    for (const Json& w : j.at("members")) members.insert(word_from_json(alphabet, w));
    return make_dense_set(std::move(alphabet), n, std::move(members));
}

}  // namespace cubestruct
