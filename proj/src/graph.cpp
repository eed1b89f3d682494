#include "lnn/graph.hpp"

#include <algorithm>

#include "lnn/fol.hpp"
#include "lnn/semantics.hpp"

namespace lnn {

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Atom: return "atom";
    case NodeKind::And: return "and";
    case NodeKind::Or: return "or";
    case NodeKind::Implies: return "implies";
    case NodeKind::ForAll: return "forall";
    case NodeKind::Exists: return "exists";
  }
  return "?";
}

namespace {

// All tuples over `universe` of length k, lexicographic in universe order.
std::vector<Tuple> product(const std::vector<int>& universe, size_t k) {
  std::vector<Tuple> out;
  if (k > 0 && universe.empty()) return out;
  Tuple t(k, 0);
  std::vector<size_t> pos(k, 0);
  for (;;) {
    for (size_t i = 0; i < k; ++i) t[i] = universe[pos[i]];
    out.push_back(t);
    size_t i = k;
    while (i > 0) {
      --i;
      if (++pos[i] < universe.size()) break;
      pos[i] = 0;
      if (i == 0) return out;
    }
    if (k == 0) return out;
  }
}

class Compiler {
 public:
  Compiler(Graph& g) : g_(g) {}

  void add_root(const std::string& id, const Formula& f, bool query, Bounds b) {
    Root root;
    root.id = id;
    root.query = query;
    root.formula = f;
    root.bounds = b;
    root.scope = f.free_variables();
    current_root_ = static_cast<int>(g_.roots.size());
    root.ref = build(f, root.scope);
    root.tuples = product(g_.universe, root.scope.size());
    const Node& ref = g_.nodes[root.ref.node];
    for (auto& t : root.tuples) {
      if (ref.is_atom())
        root.ref_rows.push_back(atom_row(root.ref.node, child_tuple(root.ref.args, t)));
      else
        root.ref_rows.push_back(ref.index.at(t));
    }
    g_.roots.push_back(std::move(root));
  }

  int atom_node(const std::string& pred, int arity) {
    auto it = g_.atom_index.find(pred);
    if (it != g_.atom_index.end()) return it->second;
    Node n;
    n.id = static_cast<int>(g_.nodes.size());
    n.kind = NodeKind::Atom;
    n.label = pred;
    n.arity = arity;
    g_.nodes.push_back(std::move(n));
    g_.atom_index[pred] = g_.nodes.back().id;
    for (auto& t : product(g_.universe, arity)) add_row(g_.nodes.back(), t);
    return g_.nodes.back().id;
  }

  int atom_row(int node, const Tuple& t) {
    Node& n = g_.nodes[node];
    auto it = n.index.find(t);
    if (it != n.index.end()) return it->second;
    return add_row(n, t);
  }

 private:
  static int add_row(Node& n, const Tuple& t) {
    int r = static_cast<int>(n.tuples.size());
    n.tuples.push_back(t);
    n.index.emplace(t, r);
    return r;
  }

  int constant(const std::string& name) { return g_.constant_index.at(name); }

  static Tuple child_tuple(const std::vector<ArgRef>& args, const Tuple& inner) {
    Tuple t;
    t.reserve(args.size());
    for (auto& a : args) t.push_back(a.kind == ArgRef::Column ? inner[a.index] : a.index);
    return t;
  }

  static std::vector<ArgRef> identity(size_t k) {
    std::vector<ArgRef> args(k);
    for (size_t i = 0; i < k; ++i) args[i] = {ArgRef::Column, static_cast<int>(i)};
    return args;
  }

  Operand build(const Formula& f, const std::vector<std::string>& scope) {
    switch (f.kind) {
      case FormulaKind::Atom: {
        Operand op;
        op.node = atom_node(f.name, static_cast<int>(f.args.size()));
        if (g_.nodes[op.node].arity != static_cast<int>(f.args.size()))
          throw ConfigError("arity mismatch for predicate " + f.name);
        for (auto& term : f.args) {
          if (!term.variable) {
            op.args.push_back({ArgRef::Constant, constant(term.name)});
            continue;
          }
          auto it = std::find(scope.begin(), scope.end(), term.name);
          if (it == scope.end()) throw ConfigError("variable out of scope: " + term.name);
          op.args.push_back({ArgRef::Column, static_cast<int>(it - scope.begin())});
        }
        return op;
      }
      case FormulaKind::Not: {
        Operand op = build(f.children[0], scope);
        op.negated = !op.negated;
        return op;
      }
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies: {
        Node n;
        n.kind = f.kind == FormulaKind::And  ? NodeKind::And
                 : f.kind == FormulaKind::Or ? NodeKind::Or
                                             : NodeKind::Implies;
        n.label = format(f);
        n.scope = scope;
        n.bias = f.bias;
        n.root = current_root_;
        for (size_t i = 0; i < f.children.size(); ++i) {
          n.operands.push_back(build(f.children[i], scope));
          n.weights.push_back(f.weights.empty() ? 1.0 : f.weights[i]);
        }
        return finish(std::move(n));
      }
      case FormulaKind::ForAll:
      case FormulaKind::Exists: {
        Node n;
        n.kind = f.kind == FormulaKind::ForAll ? NodeKind::ForAll : NodeKind::Exists;
        n.label = format(f);
        n.scope = scope;
        n.qvars = f.vars;
        n.root = current_root_;
        std::vector<std::string> inner = scope;
        for (auto& v : f.vars) {
          if (std::find(scope.begin(), scope.end(), v) != scope.end())
            throw ConfigError("quantified variable shadows an outer one: " + v);
          inner.push_back(v);
        }
        n.operands.push_back(build(f.children[0], inner));
        return finish(std::move(n));
      }
    }
    return {};
  }

  // Materializes rows and operand row maps of a freshly built non-atom node.
  Operand finish(Node n) {
    n.id = static_cast<int>(g_.nodes.size());
    for (auto& t : product(g_.universe, n.scope.size())) add_row(n, t);
    const size_t inner_extra = n.qvars.size();
    if (n.is_connective()) {
      n.child_rows.resize(n.operands.size());
      for (size_t j = 0; j < n.operands.size(); ++j) {
        auto& op = n.operands[j];
        for (auto& t : n.tuples) {
          Node& c = g_.nodes[op.node];
          n.child_rows[j].push_back(c.is_atom() ? atom_row(op.node, child_tuple(op.args, t))
                                                : c.index.at(t));
        }
      }
    } else {
      auto& op = n.operands[0];
      auto extensions = product(g_.universe, inner_extra);
      n.covered = g_.universe.size() == g_.constants.size();
      for (auto& t : n.tuples) {
        std::vector<int> group;
        for (auto& e : extensions) {
          Tuple inner = t;
          inner.insert(inner.end(), e.begin(), e.end());
          Node& c = g_.nodes[op.node];
          group.push_back(c.is_atom() ? atom_row(op.node, child_tuple(op.args, inner))
                                      : c.index.at(inner));
        }
        n.groups.push_back(std::move(group));
      }
    }
    Operand ref;
    ref.node = n.id;
    ref.args = identity(n.scope.size());
    g_.nodes.push_back(std::move(n));
    return ref;
  }

  Graph& g_;
  int current_root_ = -1;
};

}  // namespace

size_t Graph::row_count() const {
  size_t n = 0;
  for (auto& node : nodes) n += node.rows();
  return n;
}

int Graph::find_atom(const std::string& predicate) const {
  auto it = atom_index.find(predicate);
  return it == atom_index.end() ? -1 : it->second;
}

int Graph::find_root(const std::string& id) const {
  for (size_t i = 0; i < roots.size(); ++i)
    if (roots[i].id == id) return static_cast<int>(i);
  return -1;
}

int Graph::find_row(int node, const std::vector<std::string>& args) const {
  Tuple t;
  for (auto& a : args) {
    auto it = constant_index.find(a);
    if (it == constant_index.end()) return -1;
    t.push_back(it->second);
  }
  auto& idx = nodes[node].index;
  auto it = idx.find(t);
  return it == idx.end() ? -1 : it->second;
}

std::vector<std::string> Graph::tuple_names(const Tuple& t) const {
  std::vector<std::string> out;
  for (int c : t) out.push_back(constants[c]);
  return out;
}

Bounds Graph::atom_bounds(const std::string& predicate, const std::vector<std::string>& args) const {
  int n = find_atom(predicate);
  if (n < 0) return kUnknown;
  int r = find_row(n, args);
  return r < 0 ? kUnknown : nodes[n].bounds(r);
}

Bounds Graph::root_bounds(int root, size_t row) const {
  const Root& r = roots[root];
  Bounds b = nodes[r.ref.node].bounds(r.ref_rows[row]);
  return r.ref.negated ? negate(b) : b;
}

Bounds Graph::aggregate(int node, int row, Bounds proposed) {
  Node& n = nodes[node];
  bool changed = false;
  if (proposed.lower > n.lower[row].v) {
    n.lower[row] = {proposed.lower, -1};
    changed = true;
  }
  if (proposed.upper < n.upper[row].v) {
    n.upper[row] = {proposed.upper, -1};
    changed = true;
  }
  if (changed) ++n.version[row];
  return n.bounds(row);
}

void Graph::reset() {
  for (auto& n : nodes) {
    n.lower.assign(n.rows(), TVal{0.0, -1});
    n.upper.assign(n.rows(), TVal{1.0, -1});
    n.version.assign(n.rows(), 0);
  }
  for (auto& f : facts) aggregate(f.node, f.row, f.bounds);
  for (auto& r : roots) {
    if (r.query) continue;
    Bounds b = r.ref.negated ? negate(r.bounds) : r.bounds;
    for (int row : r.ref_rows) aggregate(r.ref.node, row, b);
  }
}

Graph compile(const KnowledgeBase& kb, const CompileOptions& opts) {
  Graph g;
  g.policy = opts.policy;
  for (auto& c : kb.constants) {
    if (g.constant_index.count(c)) continue;
    g.constant_index[c] = static_cast<int>(g.constants.size());
    g.constants.push_back(c);
  }
  if (opts.policy == GroundingPolicy::Full) {
    for (size_t i = 0; i < g.constants.size(); ++i) g.universe.push_back(static_cast<int>(i));
  } else {
    for (auto& c : relevant_constants(kb)) g.universe.push_back(g.constant_index.at(c));
    std::sort(g.universe.begin(), g.universe.end());
  }

  Compiler comp(g);
  for (auto& p : kb.predicates) comp.atom_node(p.name, p.arity);
  for (auto& a : kb.axioms) comp.add_root(a.id, a.formula, false, a.bounds);
  for (auto& q : kb.queries) comp.add_root(q.id, q.formula, true, kUnknown);
  for (auto& f : kb.facts) {
    int node = comp.atom_node(f.predicate, static_cast<int>(f.args.size()));
    Tuple t;
    for (auto& a : f.args) t.push_back(g.constant_index.at(a));
    int row = comp.atom_row(node, t);
    std::string label = f.predicate;
    if (!f.args.empty()) {
      label += "(";
      for (size_t i = 0; i < f.args.size(); ++i) label += (i ? "," : "") + f.args[i];
      label += ")";
    }
    g.facts.push_back({label, node, row, f.bounds});
  }
  g.reset();
  return g;
}

}  // namespace lnn
