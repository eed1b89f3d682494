#pragma once

// First-order helpers: grounding tables, joins, quantifier rules, variable
// binding and the constant selection used by guided grounding.

#include <string>
#include <utility>
#include <vector>

#include "lnn/bounds.hpp"
#include "lnn/formula.hpp"
#include "lnn/graph.hpp"

namespace lnn {

struct GroundingTable {
  std::vector<std::string> vars;
  std::vector<std::vector<std::string>> tuples;
  std::vector<Bounds> bounds;

  void add(std::vector<std::string> t, Bounds b);
  // Bounds for a tuple; (0,1) when absent.
  Bounds get(const std::vector<std::string>& t) const;
  std::string to_csv() const;
};

// Table of a node's rows, columns named after its scope (atoms: arg0, arg1, ...).
GroundingTable table_of(const Graph& g, int node);

struct JoinedRow {
  std::vector<std::string> tuple;  // over the parent variables
  std::vector<Bounds> inputs;      // one per child
};

// Natural join of child tables.  `maps[i][k]` names the parent variable bound
// by column k of child i; a variable repeated within one child only joins
// tuples that agree on those columns.
std::vector<JoinedRow> join_operands(const std::vector<std::string>& parent_vars,
                                     const std::vector<GroundingTable>& children,
                                     const std::vector<std::vector<std::string>>& maps);

// ForAll: (min L, min U); Exists: (max L, max U); empty: (0,1).
Bounds quantify_upward(NodeKind kind, const std::vector<Bounds>& rows);
// Partial quantification: reduce the named columns, group by the rest.
GroundingTable quantify_upward(NodeKind kind, const GroundingTable& t,
                               const std::vector<std::string>& quantified);
// Bounds offered to every grounding: ForAll (L,1), Exists (0,U).
Bounds quantify_downward(NodeKind kind, Bounds node);

struct BoundQuery {
  Formula formula;
  std::vector<std::pair<std::string, std::string>> bindings;  // variable, constant
};

// Records var := constant; the variable stays a column of the answer table.
BoundQuery bind(BoundQuery q, const std::string& var, const std::string& constant,
                const KnowledgeBase& kb);
// Rows of a table that agree with every binding.
GroundingTable filter(const GroundingTable& t, const BoundQuery& q);

// Constants reachable from the query constants through shared facts.  With no
// constants in any query, every constant that appears in a fact.
std::vector<std::string> relevant_constants(const KnowledgeBase& kb);

}  // namespace lnn
