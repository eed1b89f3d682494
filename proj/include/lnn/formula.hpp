#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lnn/bounds.hpp"

namespace lnn {

enum class FormulaKind { Atom, Not, And, Or, Implies, ForAll, Exists };

std::string_view to_string(FormulaKind k);

struct Term {
  std::string name;
  bool variable = true;
  bool operator==(const Term&) const = default;
};

struct Formula {
  FormulaKind kind = FormulaKind::Atom;
  std::string name;               // predicate of an atom
  std::vector<Term> args;         // atom arguments
  std::vector<std::string> vars;  // quantified variables
  std::vector<Formula> children;
  std::vector<double> weights;    // one per child of And/Or/Implies
  double bias = 1.0;              // And/Or/Implies only

  bool operator==(const Formula&) const = default;

  static Formula atom(std::string pred, std::vector<Term> args = {});
  static Formula negation(Formula f);
  static Formula connective(FormulaKind k, std::vector<Formula> children,
                            std::vector<double> weights = {}, double bias = 1.0);
  static Formula quantifier(FormulaKind k, std::vector<std::string> vars, Formula body);

  bool is_connective() const {
    return kind == FormulaKind::And || kind == FormulaKind::Or || kind == FormulaKind::Implies;
  }
  // Free variables in order of first occurrence.
  std::vector<std::string> free_variables() const;
};

struct Predicate {
  std::string name;
  int arity = 0;
};

struct Axiom {
  std::string id;
  Formula formula;
  Bounds bounds{1.0, 1.0};
};

struct Fact {
  std::string predicate;
  std::vector<std::string> args;
  Bounds bounds{1.0, 1.0};
};

struct Query {
  std::string id;
  Formula formula;
};

struct KnowledgeBase {
  std::vector<Predicate> predicates;
  std::vector<std::string> constants;
  std::vector<Axiom> axioms;
  std::vector<Fact> facts;
  std::vector<Query> queries;

  const Predicate* find_predicate(std::string_view name) const;
  bool has_constant(std::string_view c) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

struct ParseOptions {
  // Reject free variables in axioms instead of closing them universally.
  bool require_closed = false;
  // Rewrite n-ary connectives as left-nested binary ones.
  bool binary = false;
};

// Arguments naming a member of `constants` become constants, all others variables.
Formula parse_formula(std::string_view text, const std::set<std::string>& constants = {});
KnowledgeBase parse_kb(std::string_view text, const ParseOptions& opts = {});
KnowledgeBase load_kb(const std::string& path, const ParseOptions& opts = {});

std::string format(const Formula& f);
std::string format(const KnowledgeBase& kb);

Formula binary_decompose(const Formula& f);

// Exact shortest decimal form of a double.
std::string format_number(double v);

}  // namespace lnn
