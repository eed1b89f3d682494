#include "lnn/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace lnn {

double round9(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

Json to_json(Bounds b) { return Json::array({round9(b.lower), round9(b.upper)}); }

namespace {

Json row_json(const Graph& g, const Node& n, size_t r, double alpha, bool negated = false) {
  Bounds b = n.bounds(r);
  if (negated) b = negate(b);
  Json j;
  j["tuple"] = g.tuple_names(n.tuples[r]);
  j["bounds"] = to_json(b);
  j["state"] = to_string(classify(b, alpha));
  return j;
}

Json epoch_json(const EpochRecord& e) {
  Json j;
  j["epoch"] = e.epoch;
  j["lr"] = round9(e.lr);
  j["loss"] = round9(e.terms.loss);
  j["contradiction"] = round9(e.terms.contradiction);
  j["factalign"] = round9(e.terms.factalign);
  j["tightbounds"] = round9(e.terms.tightbounds);
  j["contradictions"] = e.terms.contradictions;
  j["iterations"] = e.iterations;
  j["converged"] = e.converged;
  return j;
}

}  // namespace

Json graph_json(const Graph& g, double alpha) {
  Json nodes = Json::array();
  for (auto& n : g.nodes) {
    Json j;
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    j["label"] = n.label;
    if (n.is_atom()) j["arity"] = n.arity;
    else j["scope"] = n.scope;
    if (n.is_quantifier()) j["variables"] = n.qvars;
    if (n.is_connective()) {
      Json ops = Json::array();
      for (size_t k = 0; k < n.operands.size(); ++k) {
        Json o;
        o["node"] = n.operands[k].node;
        o["negated"] = n.operands[k].negated;
        o["weight"] = round9(n.weights[k]);
        ops.push_back(o);
      }
      j["operands"] = ops;
      j["bias"] = round9(n.bias);
    } else if (n.is_quantifier()) {
      j["operands"] = Json::array({{{"node", n.operands[0].node},
                                    {"negated", n.operands[0].negated}}});
    }
    Json rows = Json::array();
    for (size_t r = 0; r < n.rows(); ++r) rows.push_back(row_json(g, n, r, alpha));
    j["rows"] = rows;
    nodes.push_back(j);
  }
  Json roots = Json::array();
  for (auto& r : g.roots) {
    Json j;
    j["id"] = r.id;
    j["kind"] = r.query ? "query" : "axiom";
    j["formula"] = format(r.formula);
    j["node"] = r.ref.node;
    j["negated"] = r.ref.negated;
    if (!r.query) j["initial"] = to_json(r.bounds);
    roots.push_back(j);
  }
  Json out;
  out["constants"] = g.constants;
  out["node_count"] = g.node_count();
  out["nodes"] = nodes;
  out["roots"] = roots;
  return out;
}

Json query_json(const Graph& g, int root, double alpha, const BoundQuery* binding) {
  const Root& r = g.roots[root];
  Json rows = Json::array();
  for (size_t k = 0; k < r.tuples.size(); ++k) {
    auto names = g.tuple_names(r.tuples[k]);
    if (binding) {
      bool ok = true;
      for (auto& [v, c] : binding->bindings) {
        auto it = std::find(r.scope.begin(), r.scope.end(), v);
        if (it != r.scope.end() && names[it - r.scope.begin()] != c) ok = false;
      }
      if (!ok) continue;
    }
    Bounds b = g.root_bounds(root, k);
    Json j;
    if (!r.scope.empty()) {
      Json t;
      for (size_t i = 0; i < r.scope.size(); ++i) t[r.scope[i]] = names[i];
      j["binding"] = t;
    }
    j["bounds"] = to_json(b);
    j["state"] = to_string(classify(b, alpha));
    rows.push_back(j);
  }
  Json out;
  out["id"] = r.id;
  out["formula"] = format(r.formula);
  if (r.scope.empty() && rows.size() == 1) {
    out["bounds"] = rows[0]["bounds"];
    out["state"] = rows[0]["state"];
  } else {
    out["variables"] = r.scope;
    out["rows"] = rows;
  }
  return out;
}

Json inference_json(const Graph& g, const ConvergenceReport& rep, const InferenceOptions& opts,
                    const std::string& only_query) {
  Json out;
  out["semantics"] = to_string(opts.family);
  out["alpha"] = round9(opts.alpha);
  out["epsilon"] = round9(opts.epsilon);
  out["converged"] = rep.converged;
  out["iterations"] = rep.iterations;
  Json deltas = Json::array();
  for (double d : rep.deltas) deltas.push_back(round9(d));
  out["deltas"] = deltas;

  Json axioms = Json::array();
  Json queries = Json::array();
  for (size_t i = 0; i < g.roots.size(); ++i) {
    const Root& r = g.roots[i];
    if (r.query) {
      if (only_query.empty() || only_query == r.id)
        queries.push_back(query_json(g, static_cast<int>(i), opts.alpha));
      continue;
    }
    if (!only_query.empty()) continue;
    axioms.push_back(query_json(g, static_cast<int>(i), opts.alpha));
  }
  if (only_query.empty()) out["axioms"] = axioms;
  out["queries"] = queries;

  Json contra = Json::array();
  for (auto& c : rep.contradictions) {
    const Node& n = g.nodes[c.node];
    Json j;
    j["node"] = c.node;
    j["label"] = n.label;
    j["tuple"] = g.tuple_names(n.tuples[c.row]);
    j["bounds"] = to_json(c.bounds);
    j["intra_classical"] = c.intra_classical;
    contra.push_back(j);
  }
  out["contradiction_count"] = contradiction_count(g, opts);
  out["contradictions"] = contra;
  return out;
}

Json checkpoint_json(const Graph& g) {
  Json out;
  out["format"] = "lnn-checkpoint";
  out["version"] = 1;
  Json nodes = Json::array();
  for (auto& n : g.nodes) {
    if (!n.is_connective()) continue;
    Json j;
    j["id"] = n.id;
    j["label"] = n.label;
    Json w = Json::array();
    for (double x : n.weights) w.push_back(round9(x));
    j["weights"] = w;
    j["bias"] = round9(n.bias);
    nodes.push_back(j);
  }
  out["connectives"] = nodes;
  Json axioms = Json::array();
  for (auto& r : g.roots) {
    if (r.query) continue;
    axioms.push_back({{"id", r.id}, {"bounds", to_json(r.bounds)}});
  }
  out["axioms"] = axioms;
  Json facts = Json::array();
  for (auto& f : g.facts) facts.push_back({{"fact", f.label}, {"bounds", to_json(f.bounds)}});
  out["facts"] = facts;
  return out;
}

Json train_json(const Graph& g, const TrainReport& rep, const TrainConfig& cfg) {
  Json c;
  c["epochs"] = cfg.epochs;
  c["lr_start"] = round9(cfg.lr_start);
  c["lr_end"] = round9(cfg.lr_end);
  c["grad_clip"] = round9(cfg.grad_clip);
  c["w_min"] = round9(cfg.w_min);
  c["alpha"] = round9(cfg.alpha);
  c["semantics"] = to_string(cfg.family);
  c["seed"] = cfg.seed;
  Json train = Json::array();
  if (cfg.train_weights) train.push_back("weights");
  if (cfg.train_bias) train.push_back("bias");
  if (cfg.train_axioms) train.push_back("axioms");
  if (cfg.train_facts) train.push_back("facts");
  c["train"] = train;
  if (!cfg.roots.empty()) c["only"] = cfg.roots;
  c["align_axioms"] = cfg.align_axioms;
  c["tight_atoms_only"] = cfg.tight_atoms_only;

  Json out;
  out["config"] = c;
  Json epochs = Json::array();
  for (auto& e : rep.epochs) epochs.push_back(epoch_json(e));
  out["epochs"] = epochs;
  out["start_loss"] = rep.epochs.empty() ? round9(rep.final_state.terms.loss)
                                         : round9(rep.epochs.front().terms.loss);
  out["final"] = epoch_json(rep.final_state);
  out["parameters"] = checkpoint_json(g);
  return out;
}

std::string inference_summary(const Graph& g, const ConvergenceReport& rep,
                              const InferenceOptions& opts) {
  std::string s;
  s += (rep.converged ? "converged" : "not converged") + std::string(" after ") +
       std::to_string(rep.iterations) + " iteration(s); " +
       std::to_string(contradiction_count(g, opts)) + " contradiction(s)\n";
  for (size_t i = 0; i < g.roots.size(); ++i) {
    const Root& r = g.roots[i];
    if (!r.query) continue;
    if (r.scope.empty()) {
      Bounds b = g.root_bounds(static_cast<int>(i));
      s += "  " + r.id + " = [" + format_number(round9(b.lower)) + ", " +
           format_number(round9(b.upper)) + "] " + std::string(to_string(classify(b, opts.alpha))) +
           "\n";
    } else {
      s += "  " + r.id + ": " + std::to_string(r.tuples.size()) + " grounding(s)\n";
    }
  }
  return s;
}

std::string train_summary(const TrainReport& rep) {
  auto line = [](const char* tag, const LossTerms& t) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%s loss %.6g (contradiction %.6g, factalign %.6g, tightbounds %.6g, %d "
                  "contradiction(s))\n",
                  tag, t.loss, t.contradiction, t.factalign, t.tightbounds, t.contradictions);
    return std::string(buf);
  };
  std::string s;
  if (!rep.epochs.empty()) s += line("start", rep.epochs.front().terms);
  s += line("end  ", rep.final_state.terms);
  return s;
}

}  // namespace lnn
