#pragma once

// Independent oracles for the test suites: random propositional expressions
// with their own classical evaluator, brute-force entailment, probability
// models over interpretations, and a textual grounder for first-order KBs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using Rng = std::mt19937_64;

inline std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

struct Expr {
  enum Kind { Var, Not, And, Or, Implies } kind = Var;
  int var = 0;
  std::vector<Expr> kids;
  std::vector<double> weights;

  bool eval(std::uint32_t world) const {
    switch (kind) {
      case Var: return (world >> var) & 1u;
      case Not: return !kids[0].eval(world);
      case And:
        for (auto& k : kids)
          if (!k.eval(world)) return false;
        return true;
      case Or:
        for (auto& k : kids)
          if (k.eval(world)) return true;
        return false;
      case Implies: return !kids[0].eval(world) || kids[1].eval(world);
    }
    return false;
  }

  std::string text(const std::vector<std::string>& names) const {
    switch (kind) {
      case Var: return names[var];
      case Not: return "~(" + kids[0].text(names) + ")";
      default: break;
    }
    const char* op = kind == And ? " & " : kind == Or ? " | " : " -> ";
    std::string s;
    for (size_t i = 0; i < kids.size(); ++i) {
      if (i) s += op;
      s += "(" + kids[i].text(names) + ")";
      if (!weights.empty() && weights[i] != 1.0) s += "^" + num(weights[i]);
    }
    return s;
  }

  size_t connectives() const {
    size_t n = (kind == And || kind == Or || kind == Implies) ? 1 : 0;
    for (auto& k : kids) n += k.connectives();
    return n;
  }

  void vars(std::set<int>& out) const {
    if (kind == Var) out.insert(var);
    for (auto& k : kids) k.vars(out);
  }
};

struct ExprOptions {
  int atoms = 4;
  int max_depth = 3;
  int max_arity = 3;
  double not_prob = 0.25;
  bool weighted = false;
  double w_lo = 0.5, w_hi = 1.0;
};

inline Expr random_expr(Rng& rng, const ExprOptions& o, int depth = 0) {
  std::uniform_real_distribution<double> u(0, 1);
  Expr e;
  if (depth >= o.max_depth || (depth > 0 && u(rng) < 0.35)) {
    e.kind = Expr::Var;
    e.var = std::uniform_int_distribution<int>(0, o.atoms - 1)(rng);
  } else {
    int pick = std::uniform_int_distribution<int>(0, 2)(rng);
    e.kind = pick == 0 ? Expr::And : pick == 1 ? Expr::Or : Expr::Implies;
    int n = e.kind == Expr::Implies ? 2 : std::uniform_int_distribution<int>(2, o.max_arity)(rng);
    for (int i = 0; i < n; ++i) {
      e.kids.push_back(random_expr(rng, o, depth + 1));
      e.weights.push_back(o.weighted ? o.w_lo + (o.w_hi - o.w_lo) * u(rng) : 1.0);
    }
  }
  if (u(rng) < o.not_prob) {
    Expr n;
    n.kind = Expr::Not;
    n.kids.push_back(std::move(e));
    return n;
  }
  return e;
}

inline std::vector<std::string> atom_names(int n, const std::string& prefix = "p") {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

// Classical models of a set of constraints: each expression must be true, each
// listed literal must have the given value.
struct Classical {
  int atoms = 0;
  std::vector<Expr> axioms;
  std::map<int, bool> literals;

  std::vector<std::uint32_t> models() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t w = 0; w < (1u << atoms); ++w) {
      bool ok = true;
      for (auto& [v, val] : literals)
        if ((((w >> v) & 1u) != 0) != val) ok = false;
      for (size_t i = 0; ok && i < axioms.size(); ++i) ok = axioms[i].eval(w);
      if (ok) out.push_back(w);
    }
    return out;
  }
};

// Probability of an event over the 2^n interpretations.
inline double probability(const std::vector<double>& p, const std::function<bool(std::uint32_t)>& ev) {
  double s = 0.0;
  for (std::uint32_t w = 0; w < p.size(); ++w)
    if (ev(w)) s += p[w];
  return s;
}

inline std::vector<double> random_distribution(Rng& rng, size_t n, double concentration = 1.0) {
  std::gamma_distribution<double> g(concentration, 1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) s += (x = g(rng) + 1e-300);
  for (auto& x : p) x /= s;
  return p;
}

// First-order grounding by text substitution: one propositional axiom per
// assignment of an axiom's free variables, enumerated lexicographically in
// first-occurrence order of the variables.
struct FolAtom {
  std::string pred;
  std::vector<std::string> args;  // variable names
};

struct FolExpr {
  enum Kind { Atom, Not, And, Or, Implies } kind = Atom;
  FolAtom atom;
  std::vector<FolExpr> kids;
  std::vector<double> weights;

  void free_vars(std::vector<std::string>& out) const {
    if (kind == Atom) {
      for (auto& a : atom.args)
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
      return;
    }
    for (auto& k : kids) k.free_vars(out);
  }

  std::string text(const std::map<std::string, std::string>* subst) const {
    if (kind == Atom) {
      if (subst) {
        std::string s = atom.pred;
        for (auto& a : atom.args) s += "__" + subst->at(a);
        return s;
      }
      std::string s = atom.pred + "(";
      for (size_t i = 0; i < atom.args.size(); ++i) s += (i ? "," : "") + atom.args[i];
      return s + ")";
    }
    if (kind == Not) return "~(" + kids[0].text(subst) + ")";
    const char* op = kind == And ? " & " : kind == Or ? " | " : " -> ";
    std::string s;
    for (size_t i = 0; i < kids.size(); ++i) {
      if (i) s += op;
      s += "(" + kids[i].text(subst) + ")";
      if (weights[i] != 1.0) s += "^" + num(weights[i]);
    }
    return s;
  }
};

struct FolKb {
  std::vector<std::pair<std::string, int>> preds;
  std::vector<std::string> constants;
  std::vector<FolExpr> axioms;
  std::vector<std::pair<double, double>> axiom_bounds;
  struct Fact {
    std::string pred;
    std::vector<std::string> args;
    double l, u;
  };
  std::vector<Fact> facts;

  std::string fol_text() const {
    std::string s;
    for (auto& [p, a] : preds) s += "pred " + p + "/" + std::to_string(a) + "\n";
    s += "const";
    for (auto& c : constants) s += " " + c;
    s += "\n";
    for (size_t i = 0; i < axioms.size(); ++i)
      s += "axiom r" + std::to_string(i) + " : " + axioms[i].text(nullptr) + " : [" +
           num(axiom_bounds[i].first) + "," + num(axiom_bounds[i].second) + "]\n";
    for (auto& f : facts) {
      s += "fact " + f.pred + "(";
      for (size_t i = 0; i < f.args.size(); ++i) s += (i ? "," : "") + f.args[i];
      s += ") : [" + num(f.l) + "," + num(f.u) + "]\n";
    }
    return s;
  }

  static std::string ground_name(const std::string& pred, const std::vector<std::string>& args) {
    std::string s = pred;
    for (auto& a : args) s += "__" + a;
    return s;
  }

  std::string propositional_text() const {
    std::string s;
    for (size_t i = 0; i < axioms.size(); ++i) {
      std::vector<std::string> vars;
      axioms[i].free_vars(vars);
      std::vector<size_t> idx(vars.size(), 0);
      for (int k = 0;; ++k) {
        std::map<std::string, std::string> sub;
        for (size_t v = 0; v < vars.size(); ++v) sub[vars[v]] = constants[idx[v]];
        s += "axiom r" + std::to_string(i) + "_" + std::to_string(k) + " : " +
             axioms[i].text(&sub) + " : [" + num(axiom_bounds[i].first) + "," +
             num(axiom_bounds[i].second) + "]\n";
        size_t v = vars.size();
        while (v > 0 && ++idx[v - 1] == constants.size()) idx[--v] = 0;
        if (v == 0) break;
      }
    }
    for (auto& f : facts)
      s += "fact " + ground_name(f.pred, f.args) + " : [" + num(f.l) + "," + num(f.u) + "]\n";
    return s;
  }
};

}  // namespace oracle
