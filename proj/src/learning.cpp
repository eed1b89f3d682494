#include "lnn/learning.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lnn/rules.hpp"

namespace lnn {

InferenceOptions TrainConfig::inference() const {
  InferenceOptions o;
  o.family = family;
  o.alpha = alpha;
  o.epsilon = epsilon;
  o.max_iters = max_iters;
  o.w_min = w_min;
  o.grad_scale = grad_scale;
  return o;
}

std::string describe(const Graph& g, const ParamRef& p) {
  switch (p.kind) {
    case ParamKind::Weight:
      return "w[" + std::to_string(p.operand) + "] of " + g.nodes[p.index].label;
    case ParamKind::Bias: return "bias of " + g.nodes[p.index].label;
    case ParamKind::FactLower: return "L of fact " + g.facts[p.index].label;
    case ParamKind::FactUpper: return "U of fact " + g.facts[p.index].label;
    case ParamKind::AxiomLower: return "L of axiom " + g.roots[p.index].id;
    case ParamKind::AxiomUpper: return "U of axiom " + g.roots[p.index].id;
  }
  return "?";
}

double& value_of(Graph& g, const ParamRef& p) {
  switch (p.kind) {
    case ParamKind::Weight: return g.nodes[p.index].weights[p.operand];
    case ParamKind::Bias: return g.nodes[p.index].bias;
    case ParamKind::FactLower: return g.facts[p.index].bounds.lower;
    case ParamKind::FactUpper: return g.facts[p.index].bounds.upper;
    case ParamKind::AxiomLower: return g.roots[p.index].bounds.lower;
    case ParamKind::AxiomUpper: return g.roots[p.index].bounds.upper;
  }
  return g.nodes[0].bias;
}

Originals originals_of(const Graph& g) {
  Originals o;
  for (auto& f : g.facts) o.facts.push_back(f.bounds);
  for (auto& r : g.roots) o.axioms.push_back(r.bounds);
  return o;
}

std::vector<ParamRef> trainable(const Graph& g, const TrainConfig& cfg) {
  auto selected = [&](int root) {
    if (cfg.roots.empty()) return true;
    return std::find(cfg.roots.begin(), cfg.roots.end(), g.roots[root].id) != cfg.roots.end();
  };
  for (auto& id : cfg.roots)
    if (g.find_root(id) < 0) throw ConfigError("no root named " + id);
  std::vector<ParamRef> out;
  for (auto& n : g.nodes) {
    if (!n.is_connective() || !selected(n.root)) continue;
    if (cfg.train_weights)
      for (size_t j = 0; j < n.weights.size(); ++j)
        out.push_back({ParamKind::Weight, n.id, static_cast<int>(j)});
    if (cfg.train_bias) out.push_back({ParamKind::Bias, n.id, 0});
  }
  if (cfg.train_axioms)
    for (size_t i = 0; i < g.roots.size(); ++i) {
      if (g.roots[i].query || !selected(static_cast<int>(i))) continue;
      out.push_back({ParamKind::AxiomLower, static_cast<int>(i), 0});
      out.push_back({ParamKind::AxiomUpper, static_cast<int>(i), 0});
    }
  if (cfg.train_facts)
    for (size_t i = 0; i < g.facts.size(); ++i) {
      out.push_back({ParamKind::FactLower, static_cast<int>(i), 0});
      out.push_back({ParamKind::FactUpper, static_cast<int>(i), 0});
    }
  return out;
}

namespace {

bool counted(Bounds b, const InferenceOptions& o) {
  return b.contradictory() && !(o.family == Family::Tailored && intra_classical(b, o.alpha));
}

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// Items the factalign mean runs over: the trainable facts, and optionally the
// trainable axioms.
struct AlignItem {
  Bounds now, then;
  ParamRef lower, upper;
};

std::vector<AlignItem> align_items(const Graph& g, const TrainConfig& cfg, const Originals& orig) {
  std::vector<AlignItem> out;
  if (cfg.train_facts)
    for (size_t i = 0; i < g.facts.size(); ++i) {
      int k = static_cast<int>(i);
      out.push_back({g.facts[i].bounds, orig.facts[i], {ParamKind::FactLower, k, 0},
                     {ParamKind::FactUpper, k, 0}});
    }
  if (cfg.align_axioms)
    for (auto& p : trainable(g, cfg))
      if (p.kind == ParamKind::AxiomLower)
        out.push_back({g.roots[p.index].bounds, orig.axioms[p.index], p,
                       {ParamKind::AxiomUpper, p.index, 0}});
  return out;
}

bool in_tightness(const Node& n, const TrainConfig& cfg) { return !cfg.tight_atoms_only || n.is_atom(); }

void set_row(Node& n, int row, const Dual& L, const Dual& U, Tape& tape) {
  if (L.v > n.lower[row].v) n.lower[row] = {L.v, tape.push(L)};
  if (U.v < n.upper[row].v) n.upper[row] = {U.v, tape.push(U)};
}

// Reset with the initial bounds recorded as tape leaves.
void tracked_reset(Graph& g, Tape& tape, const std::vector<int>& fact_ids,
                   const std::vector<int>& axiom_ids) {
  for (auto& n : g.nodes) {
    n.lower.assign(n.rows(), TVal{0.0, -1});
    n.upper.assign(n.rows(), TVal{1.0, -1});
    n.version.assign(n.rows(), 0);
  }
  for (size_t i = 0; i < g.facts.size(); ++i) {
    auto& f = g.facts[i];
    set_row(g.nodes[f.node], f.row, Dual::variable(f.bounds.lower, fact_ids[2 * i]),
            Dual::variable(f.bounds.upper, fact_ids[2 * i + 1]), tape);
  }
  for (size_t i = 0; i < g.roots.size(); ++i) {
    auto& r = g.roots[i];
    if (r.query) continue;
    DBounds b{Dual::variable(r.bounds.lower, axiom_ids[2 * i]),
              Dual::variable(r.bounds.upper, axiom_ids[2 * i + 1])};
    if (r.ref.negated) b = negate(b);
    for (int row : r.ref_rows) set_row(g.nodes[r.ref.node], row, b.L, b.U, tape);
  }
}

}  // namespace

double contradiction_loss(const Graph& g, const InferenceOptions& opts) {
  double c = 0.0;
  for (auto& n : g.nodes)
    for (size_t r = 0; r < n.rows(); ++r) {
      Bounds b = n.bounds(r);
      if (counted(b, opts)) c += b.lower - b.upper;
    }
  return c;
}

LossTerms loss_terms(const Graph& g, const TrainConfig& cfg, const Originals& orig) {
  const InferenceOptions o = cfg.inference();
  LossTerms t;
  double tight = 0.0;
  size_t rows = 0;
  for (auto& n : g.nodes)
    for (size_t r = 0; r < n.rows(); ++r) {
      Bounds b = n.bounds(r);
      if (counted(b, o)) {
        t.contradiction += b.lower - b.upper;
        ++t.contradictions;
      }
      if (!b.contradictory() && in_tightness(n, cfg)) {
        tight += std::exp(b.lower - b.upper);
        ++rows;
      }
    }
  t.tightbounds = rows ? tight / static_cast<double>(rows) : 0.0;
  auto items = align_items(g, cfg, orig);
  for (auto& it : items)
    t.factalign += std::abs(it.now.lower - it.then.lower) + std::abs(it.now.upper - it.then.upper);
  if (!items.empty()) t.factalign /= static_cast<double>(items.size());
  t.loss = (1.0 + t.contradiction) / (1.0 + t.factalign + t.tightbounds);
  return t;
}

LossTerms evaluate(Graph& g, const TrainConfig& cfg, const Originals& orig,
                   ConvergenceReport* rep) {
  g.reset();
  auto r = infer(g, cfg.inference());
  if (rep) *rep = r;
  return loss_terms(g, cfg, orig);
}

namespace {

std::vector<double> gradient_impl(Graph& g, const TrainConfig& cfg, const Originals& orig,
                                  const std::vector<ParamRef>& params, LossTerms* terms,
                                  ConvergenceReport* rep_out) {
  Tape tape;
  ParameterIds pid;
  pid.weights.resize(g.nodes.size());
  pid.bias.assign(g.nodes.size(), -1);
  for (auto& n : g.nodes) pid.weights[n.id].assign(n.weights.size(), -1);
  std::vector<int> fact_ids(2 * g.facts.size(), -1), axiom_ids(2 * g.roots.size(), -1);

  std::vector<int> leaf(params.size());
  for (size_t k = 0; k < params.size(); ++k) {
    const ParamRef& p = params[k];
    int id = tape.leaf();
    leaf[k] = id;
    switch (p.kind) {
      case ParamKind::Weight: pid.weights[p.index][p.operand] = id; break;
      case ParamKind::Bias: pid.bias[p.index] = id; break;
      case ParamKind::FactLower: fact_ids[2 * p.index] = id; break;
      case ParamKind::FactUpper: fact_ids[2 * p.index + 1] = id; break;
      case ParamKind::AxiomLower: axiom_ids[2 * p.index] = id; break;
      case ParamKind::AxiomUpper: axiom_ids[2 * p.index + 1] = id; break;
    }
  }

  const InferenceOptions o = cfg.inference();
  tracked_reset(g, tape, fact_ids, axiom_ids);
  auto rep = infer(g, o, &tape, &pid);
  if (rep_out) *rep_out = rep;
  LossTerms t = loss_terms(g, cfg, orig);
  if (terms) *terms = t;

  const double D = 1.0 + t.factalign + t.tightbounds;
  const double dc = 1.0 / D;
  const double dd = -(1.0 + t.contradiction) / (D * D);

  size_t rows = 0;
  for (auto& n : g.nodes)
    for (size_t r = 0; r < n.rows(); ++r)
      rows += !n.bounds(r).contradictory() && in_tightness(n, cfg) ? 1 : 0;

  std::vector<double> adj(tape.size(), 0.0);
  auto seed = [&](int id, double v) {
    if (id >= 0) adj[id] += v;
  };
  for (auto& n : g.nodes)
    for (size_t r = 0; r < n.rows(); ++r) {
      Bounds b = n.bounds(r);
      if (counted(b, o)) {
        seed(n.lower[r].id, dc);
        seed(n.upper[r].id, -dc);
      }
      if (!b.contradictory() && in_tightness(n, cfg)) {
        double e = dd * std::exp(b.lower - b.upper) / static_cast<double>(rows);
        seed(n.lower[r].id, e);
        seed(n.upper[r].id, -e);
      }
    }
  tape.backward(adj);

  std::vector<double> grad(params.size());
  for (size_t k = 0; k < params.size(); ++k) grad[k] = adj[leaf[k]];

  auto items = align_items(g, cfg, orig);
  if (!items.empty()) {
    const double s = dd / static_cast<double>(items.size());
    for (auto& it : items) {
      for (size_t k = 0; k < params.size(); ++k) {
        if (params[k] == it.lower) grad[k] += s * sign(it.now.lower - it.then.lower);
        if (params[k] == it.upper) grad[k] += s * sign(it.now.upper - it.then.upper);
      }
    }
  }
  return grad;
}

}  // namespace

std::vector<double> gradient(Graph& g, const TrainConfig& cfg, const Originals& orig,
                             const std::vector<ParamRef>& params, LossTerms* terms) {
  return gradient_impl(g, cfg, orig, params, terms, nullptr);
}

FiniteDifference finite_diff_gradient(Graph& g, const TrainConfig& cfg, const Originals& orig,
                                      const ParamRef& p, double h) {
  double& x = value_of(g, p);
  const double x0 = x;
  double lo = 0.0, hi = p.kind == ParamKind::Weight || p.kind == ParamKind::Bias ? kInf : 1.0;
  FiniteDifference fd;
  double a = x0 - h, b = x0 + h;
  if (a < lo) {
    a = x0;
    fd.one_sided = true;
  }
  if (b > hi) {
    b = x0;
    fd.one_sided = true;
  }
  x = b;
  double fb = evaluate(g, cfg, orig).loss;
  x = a;
  double fa = evaluate(g, cfg, orig).loss;
  x = x0;
  g.reset();
  fd.value = b > a ? (fb - fa) / (b - a) : 0.0;
  return fd;
}

void project(Graph& g, const TrainConfig& cfg) {
  std::vector<char> weights(g.nodes.size(), 0), bias(g.nodes.size(), 0), axioms(g.roots.size(), 0);
  for (auto& p : trainable(g, cfg)) {
    if (p.kind == ParamKind::Weight) weights[p.index] = 1;
    if (p.kind == ParamKind::Bias) bias[p.index] = 1;
    if (p.kind == ParamKind::AxiomLower) axioms[p.index] = 1;
  }
  for (auto& n : g.nodes) {
    if (weights[n.id]) {
      double wmax = *std::max_element(n.weights.begin(), n.weights.end());
      if (cfg.normalize_weights && wmax > 1.0)
        for (auto& w : n.weights) w /= wmax;
      for (auto& w : n.weights) w = std::clamp(w, cfg.w_min, 1.0);
    }
    if (bias[n.id]) n.bias = std::max(0.0, n.bias);
  }
  auto repair = [](Bounds& b) {
    b.lower = std::clamp(b.lower, 0.0, 1.0);
    b.upper = std::clamp(b.upper, 0.0, 1.0);
    if (b.lower > b.upper) b.lower = b.upper = 0.5 * (b.lower + b.upper);
  };
  if (cfg.train_facts)
    for (auto& f : g.facts) repair(f.bounds);
  for (size_t i = 0; i < g.roots.size(); ++i)
    if (axioms[i]) {
      auto& r = g.roots[i];
      r.bounds.lower = std::clamp(r.bounds.lower, 0.0, 1.0);
      r.bounds.upper = std::clamp(r.bounds.upper, 0.0, 1.0);
    }
}

TrainReport train(Graph& g, const TrainConfig& cfg) {
  const Originals orig = originals_of(g);
  const auto params = trainable(g, cfg);
  if (cfg.init_noise > 0.0 && cfg.train_weights) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(-cfg.init_noise, cfg.init_noise);
    for (auto& p : params)
      if (p.kind == ParamKind::Weight) value_of(g, p) += jitter(rng);
    project(g, cfg);
  }

  TrainReport rep;
  for (int e = 0; e < cfg.epochs; ++e) {
    EpochRecord rec;
    rec.epoch = e;
    rec.lr = cfg.lr_start + (cfg.lr_end - cfg.lr_start) * e / cfg.epochs;
    ConvergenceReport conv;
    auto grad = gradient_impl(g, cfg, orig, params, &rec.terms, &conv);
    rec.iterations = conv.iterations;
    rec.converged = conv.converged;
    rep.epochs.push_back(rec);
    for (size_t k = 0; k < params.size(); ++k) {
      double step = std::clamp(grad[k], -cfg.grad_clip, cfg.grad_clip);
      value_of(g, params[k]) -= rec.lr * step;
    }
    project(g, cfg);
  }

  ConvergenceReport conv;
  rep.final_state.epoch = cfg.epochs;
  rep.final_state.terms = evaluate(g, cfg, orig, &conv);
  rep.final_state.iterations = conv.iterations;
  rep.final_state.converged = conv.converged;
  return rep;
}

std::vector<ConstraintViolation> check_constraints(const ConnectiveParams& p,
                                                   const std::vector<double>& slacks) {
  constexpr double tol = 1e-12;
  std::vector<ConstraintViolation> out;
  const double a = p.alpha, beta = p.bias;
  std::vector<double> w = p.weights;
  double sum = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    double s = i < slacks.size() ? slacks[i] : 0.0;
    double margin = 1.0 - beta + a * w[i] + s - a;
    if (margin < -tol)
      out.push_back({static_cast<int>(i), margin,
                     "operand " + std::to_string(i) + ": true input cannot make the output true"});
    sum += w[i];
  }
  double margin = (1.0 - a) - ((1.0 - a) * sum - beta + 1.0);
  if (margin < -tol) out.push_back({-1, margin, "all-false inputs do not give a false output"});
  return out;
}

}  // namespace lnn
