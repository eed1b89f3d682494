#pragma once

// Compiled neuron graph.  One node per connective or quantifier occurrence and
// one shared node per predicate.  Negation is carried on edges, not nodes.
//
// Every non-atom node is grounded over its scope: the free variables of the
// enclosing axiom plus any variables bound by enclosing quantifiers.  A row of
// a connective node is therefore one ground instance of its axiom.  Atom rows
// are keyed by argument tuples and shared by all formulas.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/functional/hash.hpp>

#include "lnn/bounds.hpp"
#include "lnn/formula.hpp"

namespace lnn {

enum class NodeKind { Atom, And, Or, Implies, ForAll, Exists };

std::string_view to_string(NodeKind k);

struct ArgRef {
  enum Kind : std::uint8_t { Column, Constant };
  Kind kind = Column;
  int index = 0;  // column of the parent's inner scope, or constant id
};

struct Operand {
  int node = -1;
  bool negated = false;
  std::vector<ArgRef> args;
};

// A stored bound: value plus the tape variable it was recorded as (-1 if none).
struct TVal {
  double v = 0.0;
  int id = -1;
};

using Tuple = std::vector<int>;
using TupleIndex = std::unordered_map<Tuple, int, boost::hash<Tuple>>;

struct Node {
  int id = -1;
  NodeKind kind = NodeKind::Atom;
  std::string label;
  int arity = 0;                    // atoms
  std::vector<std::string> scope;   // row columns (non-atoms)
  std::vector<std::string> qvars;   // quantifiers
  std::vector<Operand> operands;
  std::vector<double> weights;      // connectives, one per operand
  double bias = 1.0;
  int root = -1;                    // owning root for non-atoms

  std::vector<Tuple> tuples;
  TupleIndex index;
  std::vector<TVal> lower, upper;
  std::vector<std::uint64_t> version;

  std::vector<std::vector<int>> child_rows;  // connectives: [operand][row]
  std::vector<std::vector<int>> groups;      // quantifiers: [row] -> body rows
  bool covered = true;                       // quantifier groups span the universe

  bool is_atom() const { return kind == NodeKind::Atom; }
  bool is_connective() const {
    return kind == NodeKind::And || kind == NodeKind::Or || kind == NodeKind::Implies;
  }
  bool is_quantifier() const { return kind == NodeKind::ForAll || kind == NodeKind::Exists; }
  size_t rows() const { return tuples.size(); }
  Bounds bounds(size_t row) const { return {lower[row].v, upper[row].v}; }
};

struct Root {
  std::string id;
  bool query = false;
  Formula formula;
  Operand ref;
  std::vector<std::string> scope;
  std::vector<Tuple> tuples;
  std::vector<int> ref_rows;
  Bounds bounds{1.0, 1.0};  // axioms only
};

struct FactSeed {
  std::string label;
  int node = -1;
  int row = -1;
  Bounds bounds;
};

enum class GroundingPolicy {
  Full,    // every scope is grounded over all constants
  Guided,  // only over constants connected to the query constants through facts
};

struct CompileOptions {
  GroundingPolicy policy = GroundingPolicy::Full;
};

struct Graph {
  std::vector<std::string> constants;
  std::unordered_map<std::string, int> constant_index;
  std::vector<int> universe;  // constant ids rows are grounded over
  GroundingPolicy policy = GroundingPolicy::Full;

  std::vector<Node> nodes;
  std::vector<Root> roots;
  std::vector<FactSeed> facts;
  std::unordered_map<std::string, int> atom_index;

  size_t node_count() const { return nodes.size(); }
  size_t row_count() const;
  int find_atom(const std::string& predicate) const;
  int find_root(const std::string& id) const;
  // Row of `node` for the given constant names, or -1.
  int find_row(int node, const std::vector<std::string>& args) const;
  std::vector<std::string> tuple_names(const Tuple& t) const;

  // Bounds of a ground atom; (0,1) when the tuple was never materialized.
  Bounds atom_bounds(const std::string& predicate, const std::vector<std::string>& args = {}) const;
  // Bounds of a root at one of its rows (through the edge polarity).
  Bounds root_bounds(int root, size_t row = 0) const;

  // Initial state: everything unknown, then facts and axiom bounds seeded.
  void reset();
  // Monotone tightening of a stored row.  Returns the resulting bounds.
  Bounds aggregate(int node, int row, Bounds proposed);
};

Graph compile(const KnowledgeBase& kb, const CompileOptions& opts = {});

}  // namespace lnn
