#pragma once

#include <memory>
#include <string>
#include <vector>

#include "freeterm/distsim.hpp"

namespace freeterm {

// Small s-expression language for Boolean queries over instances:
//
//   expr  ::= fact | (and expr...) | (or expr...) | (not expr)
//           | (exists REL) | (count-ge N) | (count-ge N REL)
//           | (above SET...)
//   fact  ::= REL(value,...)            e.g. R(1,c) or Vote()
//   SET   ::= {fact,...}                e.g. {R(a),S(a)}
//
// A bare fact tests membership. exists/count-ge look at one relation (or,
// for count-ge without REL, at the whole instance). above is the threshold
// form: true iff the instance contains at least one of the listed sets.
// Values are integers when they parse as such, strings otherwise.
class QueryExpr {
  public:
    static QueryExpr parse(const std::string& text);

    bool eval(const Instance& s) const;
    const std::string& text() const { return text_; }

    // Evaluation closure sharing the parsed tree.
    BoolQuery fn() const;

    struct Node;

  private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

Fact parse_fact_literal(const std::string& text);

// Built-in query registry for the simulator. Boolean entries carry eval,
// set-valued entries carry a per-tuple query plus the candidate outputs it
// can produce over a given universe.
struct NamedQuery {
    std::string name;
    std::string description;
    BoolQuery boolean;  // empty for set-valued entries
    SetQuery set_valued; // empty for Boolean entries
};

const std::vector<NamedQuery>& named_queries();

// Resolves a --query argument: an expression when it parses as one, else a
// registry lookup. Set-valued names are rejected here.
DistQuery resolve_bool_query(const std::string& spec);

// Registry lookup for a set-valued query, with the candidate tuples it can
// emit over the given universe.
struct ResolvedSetQuery {
    std::string name;
    SetQuery eval;
    std::vector<Tuple> candidates;
};

ResolvedSetQuery resolve_set_query(const std::string& name, const FactUniverse& u);

} // namespace freeterm
