#include "lnn/inference.hpp"

#include <cmath>
#include <limits>

#include "lnn/rules.hpp"

namespace lnn {

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

Connective connective_of(NodeKind k) {
  switch (k) {
    case NodeKind::And: return Connective::And;
    case NodeKind::Or: return Connective::Or;
    default: return Connective::Implies;
  }
}

class Engine {
 public:
  Engine(Graph& g, const InferenceOptions& o, Tape* tape, const ParameterIds* ids)
      : g_(g), o_(o), tape_(tape) {
    weights_.resize(g.nodes.size());
    bias_.resize(g.nodes.size(), 1.0);
    up_key_.resize(g.nodes.size());
    down_key_.resize(g.nodes.size());
    for (auto& n : g.nodes) {
      for (size_t j = 0; j < n.weights.size(); ++j) {
        int id = ids && tape ? ids->weights[n.id][j] : -1;
        weights_[n.id].push_back(Dual::variable(n.weights[j], id));
      }
      bias_[n.id] = Dual::variable(n.bias, ids && tape ? ids->bias[n.id] : -1);
      if (!n.is_atom()) {
        up_key_[n.id].assign(n.rows(), kNever);
        down_key_[n.id].assign(n.rows(), kNever);
      }
    }
  }

  double visit(const Root& root, bool up, bool down) {
    delta_ = 0.0;
    if (g_.nodes[root.ref.node].is_atom()) return 0.0;
    for (int r : root.ref_rows) {
      if (up) upward(root.ref.node, r);
      if (down && !root.query) downward(root.ref.node, r);
    }
    return delta_;
  }

 private:
  DBounds operand(const Operand& op, int row) const {
    const Node& c = g_.nodes[op.node];
    DBounds b{Dual::variable(c.lower[row].v, c.lower[row].id),
              Dual::variable(c.upper[row].v, c.upper[row].id)};
    return op.negated ? negate(b) : b;
  }

  // Aggregates a proposal for operand `op` at `row` through its polarity.
  void offer(const Operand& op, int row, DBounds p) {
    if (op.negated) p = negate(p);
    Node& c = g_.nodes[op.node];
    bool changed = false;
    if (p.L.v > c.lower[row].v) {
      delta_ += p.L.v - c.lower[row].v;
      c.lower[row] = {p.L.v, tape_ ? tape_->push(p.L) : -1};
      changed = true;
    }
    if (p.U.v < c.upper[row].v) {
      delta_ += c.upper[row].v - p.U.v;
      c.upper[row] = {p.U.v, tape_ ? tape_->push(p.U) : -1};
      changed = true;
    }
    if (changed) ++c.version[row];
  }

  RuleContext context(const Node& n) const {
    RuleContext ctx;
    ctx.family = o_.family;
    ctx.alpha = o_.alpha;
    ctx.grad_scale = o_.grad_scale;
    ctx.w_min = o_.w_min;
    ctx.bias = bias_[n.id];
    ctx.weights = weights_[n.id];
    return ctx;
  }

  std::uint64_t input_key(const Node& n, int r) const {
    std::uint64_t k = 0;
    if (n.is_connective()) {
      for (size_t j = 0; j < n.operands.size(); ++j)
        k += g_.nodes[n.operands[j].node].version[n.child_rows[j][r]];
    } else {
      const Node& body = g_.nodes[n.operands[0].node];
      for (int cr : n.groups[r]) k += body.version[cr];
    }
    return k;
  }

  void upward(int id, int r) {
    Node& n = g_.nodes[id];
    if (n.is_connective()) {
      for (size_t j = 0; j < n.operands.size(); ++j)
        if (!g_.nodes[n.operands[j].node].is_atom()) upward(n.operands[j].node, n.child_rows[j][r]);
    } else {
      int body = n.operands[0].node;
      if (!g_.nodes[body].is_atom())
        for (int cr : n.groups[r]) upward(body, cr);
    }
    std::uint64_t key = input_key(n, r);
    if (o_.skip_unchanged && up_key_[id][r] == key) return;
    up_key_[id][r] = key;

    Operand self{id, false, {}};
    if (n.is_connective()) {
      in_.clear();
      for (size_t j = 0; j < n.operands.size(); ++j)
        in_.push_back(operand(n.operands[j], n.child_rows[j][r]));
      offer(self, r, lnn::upward(connective_of(n.kind), context(n), in_));
      return;
    }
    const auto& group = n.groups[r];
    if (group.empty()) return;
    const bool all = n.kind == NodeKind::ForAll;
    DBounds acc = operand(n.operands[0], group[0]);
    for (size_t k = 1; k < group.size(); ++k) {
      DBounds b = operand(n.operands[0], group[k]);
      acc.L = all ? dmin(acc.L, b.L) : dmax(acc.L, b.L);
      acc.U = all ? dmin(acc.U, b.U) : dmax(acc.U, b.U);
    }
    // Groundings outside the universe are unknown.
    if (!n.covered) {
      if (all) acc.L = 0.0;
      else acc.U = 1.0;
    }
    offer(self, r, acc);
  }

  void downward(int id, int r) {
    Node& n = g_.nodes[id];
    std::uint64_t key = input_key(n, r) + n.version[r];
    // A tailored clash inside one classical region still proves that region.
    Bounds b{n.lower[r].v, n.upper[r].v};
    bool intra = o_.family == Family::Tailored && intra_classical(b, o_.alpha);
    bool live = !(o_.halt_at_contradiction && b.contradictory() && !intra);
    if (live && !(o_.skip_unchanged && down_key_[id][r] == key)) {
      down_key_[id][r] = key;
      DBounds out{Dual::variable(n.lower[r].v, n.lower[r].id),
                  Dual::variable(n.upper[r].v, n.upper[r].id)};
      if (intra) {
        if (b.upper >= o_.alpha) out.U = 1.0;
        else out.L = 0.0;
      }
      if (n.is_connective()) {
        RuleContext ctx = context(n);
        for (size_t j = 0; j < n.operands.size(); ++j) {
          in_.clear();
          for (size_t i = 0; i < n.operands.size(); ++i)
            in_.push_back(operand(n.operands[i], n.child_rows[i][r]));
          offer(n.operands[j], n.child_rows[j][r],
                lnn::downward(connective_of(n.kind), ctx, out, in_, j));
        }
      } else {
        DBounds p = n.kind == NodeKind::ForAll ? DBounds{out.L, 1.0} : DBounds{0.0, out.U};
        for (int cr : n.groups[r]) offer(n.operands[0], cr, p);
      }
    }
    if (n.is_connective()) {
      for (size_t j = 0; j < n.operands.size(); ++j)
        if (!g_.nodes[n.operands[j].node].is_atom())
          downward(n.operands[j].node, n.child_rows[j][r]);
    } else {
      int body = n.operands[0].node;
      if (!g_.nodes[body].is_atom())
        for (int cr : n.groups[r]) downward(body, cr);
    }
  }

  Graph& g_;
  const InferenceOptions& o_;
  Tape* tape_;
  std::vector<std::vector<Dual>> weights_;
  std::vector<Dual> bias_;
  std::vector<std::vector<std::uint64_t>> up_key_, down_key_;
  std::vector<DBounds> in_;
  double delta_ = 0.0;
};

}  // namespace

void validate(const Graph& g, const InferenceOptions& opts) {
  if (!(opts.alpha > 0.5 && opts.alpha <= 1.0)) throw ConfigError("alpha must lie in (1/2, 1]");
  if (!(opts.epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  if (opts.max_iters < 1) throw ConfigError("max_iters must be at least 1");
  for (auto& n : g.nodes) {
    if (!n.is_connective()) continue;
    for (double w : n.weights)
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("weights must be finite and >= 0");
    if (!(n.bias >= 0.0) || !std::isfinite(n.bias)) throw ConfigError("bias must be finite and >= 0");
    ConnectiveParams p{n.bias, n.weights, opts.alpha, opts.family};
    if (opts.family == Family::Tailored && !tailored_alpha_valid(p))
      throw ConfigError("alpha too small for the tailored activation of " + n.label);
    if (opts.family == Family::Logistic) logistic_coefficients(p, Form::Disjunction);
  }
}

ConvergenceReport infer(Graph& g, const InferenceOptions& opts, Tape* tape,
                        const ParameterIds* ids) {
  validate(g, opts);
  Engine e(g, opts, tape, ids);
  ConvergenceReport rep;
  for (int it = 1; it <= opts.max_iters; ++it) {
    double delta = 0.0;
    for (auto& root : g.roots) delta += e.visit(root, true, true);
    rep.deltas.push_back(delta);
    rep.iterations = it;
    if (delta <= opts.epsilon) {
      rep.converged = true;
      break;
    }
  }
  rep.contradictions = contradictions(g, opts.alpha);
  return rep;
}

double upward_pass(Graph& g, int root, const InferenceOptions& opts) {
  Engine e(g, opts, nullptr, nullptr);
  return e.visit(g.roots[root], true, false);
}

double downward_pass(Graph& g, int root, const InferenceOptions& opts) {
  Engine e(g, opts, nullptr, nullptr);
  return e.visit(g.roots[root], false, true);
}

std::vector<ContradictionEntry> contradictions(const Graph& g, double alpha) {
  std::vector<ContradictionEntry> out;
  for (auto& n : g.nodes)
    for (size_t r = 0; r < n.rows(); ++r) {
      Bounds b = n.bounds(r);
      if (b.contradictory())
        out.push_back({n.id, static_cast<int>(r), b, intra_classical(b, alpha)});
    }
  return out;
}

size_t contradiction_count(const Graph& g, const InferenceOptions& opts) {
  size_t k = 0;
  for (auto& c : contradictions(g, opts.alpha))
    if (!(opts.family == Family::Tailored && c.intra_classical)) ++k;
  return k;
}

}  // namespace lnn
