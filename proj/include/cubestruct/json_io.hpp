#pragma once

#include "json.hpp"

#include "cubestruct/dhjlab.hpp"
#include "cubestruct/process.hpp"

namespace cubestruct {

using Json = nlohmann::json;

/// Words are arrays of symbol tokens; variable words additionally use the
/// reserved tokens "x1", "x2", ... which no alphabet may contain.
Json word_to_json(const Alphabet& a, const Word& w);
Word word_from_json(const AlphabetPtr& a, const Json& j);

Json variable_word_to_json(const VariableWord& v);
VariableWord variable_word_from_json(const AlphabetPtr& a, const Json& j);

/// Formulas: {"and": [...]}, {"or": [...]}, {"not": ...}, {"gen": "name"},
/// "true", "false".
Json formula_to_json(const BernoulliProduct& product, int node);
int formula_from_json(BernoulliProduct& product, const Json& j);

/// Formula events serialize as formulas, mask events as 0/1 arrays.
Json event_to_json(const Event& e);

/// {"alphabet": [...], "n": ..., "space": {...}, "events": [...]} with events
/// in word-rank order. Space: {"kind": "bernoulli", "epsilon": "a/b",
/// "generators": [...]} or {"kind": "atoms", "weights": [...]}.
Json process_to_json(const CubeProcess& proc);
CubeProcess process_from_json(const Json& j);

/// {"alphabet": [...], "n": ..., "members": [...]} with members sorted.
Json dense_set_to_json(const DenseSet& D);
DenseSet dense_set_from_json(const Json& j);

AlphabetPtr alphabet_from_json(const Json& j);

}  // namespace cubestruct
