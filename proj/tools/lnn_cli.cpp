// lnn: inference, training and constraint checks on knowledge-base files.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 parse error,
// 3 nonconvergence under --strict.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lnn/fol.hpp"
#include "lnn/formula.hpp"
#include "lnn/graph.hpp"
#include "lnn/inference.hpp"
#include "lnn/learning.hpp"
#include "lnn/report.hpp"

namespace {

using namespace lnn;

struct Common {
  std::string kb_path;
  std::string semantics;
  double alpha = 1.0;
  std::string out;
  bool strict = false;
  bool binary = false;
};

Family family_of(const std::string& s) {
  auto f = parse_family(s);
  if (!f) throw ConfigError("unknown semantics '" + s + "'");
  return *f;
}

void emit(const Json& j, const std::string& out, const std::string& summary) {
  std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ConfigError("cannot write " + out);
  f << text;
  std::cout << summary;
}

int run_infer(const Common& c, const std::string& query, const std::vector<std::string>& binds,
              double epsilon, int max_iters, bool guided, bool dump_graph) {
  ParseOptions po;
  po.binary = c.binary;
  KnowledgeBase kb = load_kb(c.kb_path, po);
  CompileOptions co;
  co.policy = guided ? GroundingPolicy::Guided : GroundingPolicy::Full;
  Graph g = compile(kb, co);

  InferenceOptions opts;
  opts.family = family_of(c.semantics);
  opts.alpha = c.alpha;
  opts.epsilon = epsilon;
  opts.max_iters = max_iters;
  auto rep = infer(g, opts);

  if (!query.empty() && g.find_root(query) < 0) throw ConfigError("no query named " + query);
  Json j = inference_json(g, rep, opts, query);
  if (!binds.empty()) {
    if (query.empty()) throw ConfigError("--bind needs --query");
    int root = g.find_root(query);
    BoundQuery bq{g.roots[root].formula, {}};
    for (auto& b : binds) {
      auto eq = b.find('=');
      if (eq == std::string::npos) throw ConfigError("--bind expects var=constant");
      bq = lnn::bind(bq, b.substr(0, eq), b.substr(eq + 1), kb);
    }
    j["queries"] = Json::array({query_json(g, root, opts.alpha, &bq)});
  }
  if (dump_graph) j["graph"] = graph_json(g, opts.alpha);
  emit(j, c.out, inference_summary(g, rep, opts));
  return c.strict && !rep.converged ? 3 : 0;
}

int run_train(const Common& c, TrainConfig cfg, const std::string& train_list,
              const std::string& checkpoint) {
  ParseOptions po;
  po.binary = c.binary;
  KnowledgeBase kb = load_kb(c.kb_path, po);
  Graph g = compile(kb);
  cfg.family = family_of(c.semantics);
  cfg.alpha = c.alpha;
  cfg.train_weights = cfg.train_bias = cfg.train_axioms = cfg.train_facts = false;
  std::stringstream ss(train_list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item == "weights") cfg.train_weights = true;
    else if (item == "bias") cfg.train_bias = true;
    else if (item == "axioms") cfg.train_axioms = true;
    else if (item == "facts") cfg.train_facts = true;
    else throw ConfigError("unknown trainable group '" + item + "'");
  }
  validate(g, cfg.inference());
  auto rep = train(g, cfg);
  if (!checkpoint.empty()) {
    std::ofstream f(checkpoint);
    if (!f) throw ConfigError("cannot write " + checkpoint);
    f << checkpoint_json(g).dump(2) << "\n";
  }
  emit(train_json(g, rep, cfg), c.out, train_summary(rep));
  bool ok = rep.final_state.converged;
  for (auto& e : rep.epochs) ok = ok && e.converged;
  return c.strict && !ok ? 3 : 0;
}

int run_check(const Common& c) {
  ParseOptions po;
  po.binary = c.binary;
  KnowledgeBase kb = load_kb(c.kb_path, po);
  Graph g = compile(kb);
  Json nodes = Json::array();
  size_t violated = 0;
  for (auto& n : g.nodes) {
    if (!n.is_connective()) continue;
    ConnectiveParams p{n.bias, n.weights, c.alpha, Family::Lukasiewicz};
    auto v = check_constraints(p);
    violated += v.size();
    Json j;
    j["node"] = n.id;
    j["label"] = n.label;
    Json list = Json::array();
    for (auto& x : v)
      list.push_back({{"operand", x.operand}, {"margin", round9(x.margin)},
                      {"description", x.description}});
    j["violations"] = list;
    nodes.push_back(j);
  }
  Json out;
  out["alpha"] = round9(c.alpha);
  out["violation_count"] = violated;
  out["connectives"] = nodes;
  emit(out, c.out, std::to_string(violated) + " constraint violation(s)\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted real-valued logic: inference and learning"};
  app.require_subcommand(1);

  const char* env = std::getenv("LNN_SEMANTICS");
  Common c;
  c.semantics = env && *env ? env : "lukasiewicz";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("kb", c.kb_path, "knowledge-base file")->required();
    sub->add_option("--semantics", c.semantics,
                    "lukasiewicz | godel | tailored | logistic | probability (default from "
                    "LNN_SEMANTICS)");
    sub->add_option("--alpha", c.alpha, "threshold of truth");
    sub->add_option("--out", c.out, "write the JSON report here instead of stdout");
    sub->add_flag("--strict", c.strict, "exit 3 when inference does not converge");
    sub->add_flag("--binary", c.binary, "decompose n-ary connectives into binary ones");
  };

  auto* infer_cmd = app.add_subcommand("infer", "run inference to convergence");
  add_common(infer_cmd);
  std::string query;
  std::vector<std::string> binds;
  double epsilon = 1e-4;
  int max_iters = 1000;
  bool guided = false, dump_graph = false;
  infer_cmd->add_option("--query", query, "report only this query");
  infer_cmd->add_option("--bind", binds, "var=constant binding for --query");
  infer_cmd->add_option("--epsilon", epsilon, "convergence threshold");
  infer_cmd->add_option("--max-iters", max_iters, "iteration limit");
  infer_cmd->add_flag("--guided", guided, "ground only constants connected to the queries");
  infer_cmd->add_flag("--dump-graph", dump_graph, "include the full graph in the report");

  auto* train_cmd = app.add_subcommand("train", "learn weights and bounds");
  add_common(train_cmd);
  TrainConfig cfg;
  std::string train_list = "weights,axioms,facts", checkpoint;
  train_cmd->add_option("--epochs", cfg.epochs, "training epochs");
  train_cmd->add_option("--lr-start", cfg.lr_start, "initial learning rate");
  train_cmd->add_option("--lr-end", cfg.lr_end, "final learning rate");
  train_cmd->add_option("--grad-clip", cfg.grad_clip, "gradient clipping magnitude");
  train_cmd->add_option("--w-min", cfg.w_min, "smallest weight");
  train_cmd->add_option("--train", train_list, "comma list of weights,bias,axioms,facts");
  train_cmd->add_option("--only", cfg.roots, "restrict weight and axiom training to these axioms");
  train_cmd->add_flag("--align-axioms", cfg.align_axioms, "count axiom-bound drift in factalign");
  train_cmd->add_flag("--tight-atoms", cfg.tight_atoms_only, "average tightbounds over atoms only");
  train_cmd->add_option("--seed", cfg.seed, "seed for --init-noise");
  train_cmd->add_option("--init-noise", cfg.init_noise, "uniform jitter of initial weights");
  train_cmd->add_option("--checkpoint", checkpoint, "write learned parameters here");

  auto* check_cmd = app.add_subcommand("check", "check classicality constraints");
  add_common(check_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*infer_cmd) return run_infer(c, query, binds, epsilon, max_iters, guided, dump_graph);
    if (*train_cmd) return run_train(c, cfg, train_list, checkpoint);
    return run_check(c);
  } catch (const lnn::ParseError& e) {
    std::cerr << c.kb_path << ":" << e.what() << "\n";  // what() leads with line:col
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
