#include "lnn/fol.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "lnn/semantics.hpp"

namespace lnn {

void GroundingTable::add(std::vector<std::string> t, Bounds b) {
  tuples.push_back(std::move(t));
  bounds.push_back(b);
}

Bounds GroundingTable::get(const std::vector<std::string>& t) const {
  for (size_t i = 0; i < tuples.size(); ++i)
    if (tuples[i] == t) return bounds[i];
  return kUnknown;
}

std::string GroundingTable::to_csv() const {
  std::string out;
  for (auto& v : vars) out += v + ",";
  out += "L,U\n";
  for (size_t i = 0; i < tuples.size(); ++i) {
    for (auto& c : tuples[i]) out += c + ",";
    out += format_number(bounds[i].lower) + "," + format_number(bounds[i].upper) + "\n";
  }
  return out;
}

GroundingTable table_of(const Graph& g, int node) {
  const Node& n = g.nodes[node];
  GroundingTable t;
  if (n.is_atom()) {
    for (int i = 0; i < n.arity; ++i) t.vars.push_back("arg" + std::to_string(i));
  } else {
    t.vars = n.scope;
  }
  for (size_t r = 0; r < n.rows(); ++r) t.add(g.tuple_names(n.tuples[r]), n.bounds(r));
  return t;
}

namespace {

struct Joiner {
  const std::vector<std::string>& parent_vars;
  const std::vector<GroundingTable>& children;
  const std::vector<std::vector<std::string>>& maps;
  std::map<std::string, std::string> binding;
  std::vector<Bounds> inputs;
  std::vector<JoinedRow> out;

  void run(size_t i) {
    if (i == children.size()) {
      JoinedRow row;
      for (auto& v : parent_vars) {
        auto it = binding.find(v);
        if (it == binding.end()) return;
        row.tuple.push_back(it->second);
      }
      row.inputs = inputs;
      out.push_back(std::move(row));
      return;
    }
    const auto& map = maps[i];
    bool covered = std::all_of(map.begin(), map.end(),
                               [&](const std::string& v) { return binding.count(v) > 0; });
    bool matched = false;
    for (size_t r = 0; r < children[i].tuples.size(); ++r) {
      const auto& t = children[i].tuples[r];
      std::vector<std::string> added;
      bool ok = true;
      for (size_t k = 0; k < map.size() && ok; ++k) {
        auto it = binding.find(map[k]);
        if (it == binding.end()) {
          binding[map[k]] = t[k];
          added.push_back(map[k]);
        } else if (it->second != t[k]) {
          ok = false;
        }
      }
      if (ok) {
        matched = true;
        inputs.push_back(children[i].bounds[r]);
        run(i + 1);
        inputs.pop_back();
      }
      for (auto& v : added) binding.erase(v);
    }
    // A fully bound grounding this child has never seen enters as unknown.
    if (covered && !matched) {
      inputs.push_back(kUnknown);
      run(i + 1);
      inputs.pop_back();
    }
  }
};

}  // namespace

std::vector<JoinedRow> join_operands(const std::vector<std::string>& parent_vars,
                                     const std::vector<GroundingTable>& children,
                                     const std::vector<std::vector<std::string>>& maps) {
  if (maps.size() != children.size()) throw std::invalid_argument("one map per child required");
  Joiner j{parent_vars, children, maps, {}, {}, {}};
  j.run(0);
  return std::move(j.out);
}

Bounds quantify_upward(NodeKind kind, const std::vector<Bounds>& rows) {
  if (rows.empty()) return kUnknown;
  Bounds r = rows[0];
  for (auto& b : rows) {
    if (kind == NodeKind::ForAll) {
      r.lower = std::min(r.lower, b.lower);
      r.upper = std::min(r.upper, b.upper);
    } else {
      r.lower = std::max(r.lower, b.lower);
      r.upper = std::max(r.upper, b.upper);
    }
  }
  return r;
}

GroundingTable quantify_upward(NodeKind kind, const GroundingTable& t,
                               const std::vector<std::string>& quantified) {
  std::vector<size_t> keep;
  for (size_t i = 0; i < t.vars.size(); ++i) {
    if (std::find(quantified.begin(), quantified.end(), t.vars[i]) == quantified.end())
      keep.push_back(i);
  }
  for (auto& q : quantified)
    if (std::find(t.vars.begin(), t.vars.end(), q) == t.vars.end())
      throw std::invalid_argument("quantified variable not in table: " + q);
  GroundingTable out;
  for (size_t i : keep) out.vars.push_back(t.vars[i]);
  std::vector<std::vector<Bounds>> groups;
  for (size_t r = 0; r < t.tuples.size(); ++r) {
    std::vector<std::string> key;
    for (size_t i : keep) key.push_back(t.tuples[r][i]);
    auto it = std::find(out.tuples.begin(), out.tuples.end(), key);
    if (it == out.tuples.end()) {
      out.add(key, kUnknown);
      groups.emplace_back();
      groups.back().push_back(t.bounds[r]);
    } else {
      groups[it - out.tuples.begin()].push_back(t.bounds[r]);
    }
  }
  for (size_t g = 0; g < groups.size(); ++g) out.bounds[g] = quantify_upward(kind, groups[g]);
  if (out.tuples.empty() && keep.empty()) out.add({}, kUnknown);
  return out;
}

Bounds quantify_downward(NodeKind kind, Bounds node) {
  if (kind == NodeKind::ForAll) return {node.lower, 1.0};
  return {0.0, node.upper};
}

BoundQuery bind(BoundQuery q, const std::string& var, const std::string& constant,
                const KnowledgeBase& kb) {
  auto fv = q.formula.free_variables();
  if (std::find(fv.begin(), fv.end(), var) == fv.end())
    throw ConfigError("variable " + var + " does not occur free in the query");
  if (!kb.has_constant(constant)) throw ConfigError("unknown constant " + constant);
  for (auto& [v, c] : q.bindings)
    if (v == var) throw ConfigError("variable " + var + " is already bound");
  q.bindings.emplace_back(var, constant);
  return q;
}

GroundingTable filter(const GroundingTable& t, const BoundQuery& q) {
  GroundingTable out;
  out.vars = t.vars;
  for (size_t r = 0; r < t.tuples.size(); ++r) {
    bool ok = true;
    for (auto& [v, c] : q.bindings) {
      auto it = std::find(t.vars.begin(), t.vars.end(), v);
      if (it != t.vars.end() && t.tuples[r][it - t.vars.begin()] != c) ok = false;
    }
    if (ok) out.add(t.tuples[r], t.bounds[r]);
  }
  return out;
}

namespace {

void collect_constants(const Formula& f, std::set<std::string>& out) {
  for (auto& t : f.args)
    if (!t.variable) out.insert(t.name);
  for (auto& c : f.children) collect_constants(c, out);
}

}  // namespace

std::vector<std::string> relevant_constants(const KnowledgeBase& kb) {
  std::set<std::string> seeds;
  for (auto& q : kb.queries) collect_constants(q.formula, seeds);
  std::set<std::string> reached;
  if (seeds.empty()) {
    for (auto& f : kb.facts) reached.insert(f.args.begin(), f.args.end());
  } else {
    reached = seeds;
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto& f : kb.facts) {
        bool touches = std::any_of(f.args.begin(), f.args.end(),
                                   [&](auto& a) { return reached.count(a) > 0; });
        if (!touches) continue;
        for (auto& a : f.args) grew |= reached.insert(a).second;
      }
    }
  }
  std::vector<std::string> out;
  for (auto& c : kb.constants)
    if (reached.count(c)) out.push_back(c);
  return out;
}

}  // namespace lnn
