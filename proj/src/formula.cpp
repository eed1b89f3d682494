#include "lnn/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lnn {

std::string_view to_string(FormulaKind k) {
  switch (k) {
    case FormulaKind::Atom: return "atom";
    case FormulaKind::Not: return "not";
    case FormulaKind::And: return "and";
    case FormulaKind::Or: return "or";
    case FormulaKind::Implies: return "implies";
    case FormulaKind::ForAll: return "forall";
    case FormulaKind::Exists: return "exists";
  }
  return "?";
}

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  Formula f;
  f.kind = FormulaKind::Atom;
  f.name = std::move(pred);
  f.args = std::move(args);
  return f;
}

Formula Formula::negation(Formula c) {
  Formula f;
  f.kind = FormulaKind::Not;
  f.children.push_back(std::move(c));
  return f;
}

Formula Formula::connective(FormulaKind k, std::vector<Formula> children,
                            std::vector<double> weights, double bias) {
  Formula f;
  f.kind = k;
  if (weights.empty()) weights.assign(children.size(), 1.0);
  f.children = std::move(children);
  f.weights = std::move(weights);
  f.bias = bias;
  return f;
}

Formula Formula::quantifier(FormulaKind k, std::vector<std::string> vars, Formula body) {
  Formula f;
  f.kind = k;
  f.vars = std::move(vars);
  f.children.push_back(std::move(body));
  return f;
}

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound,
                  std::vector<std::string>& out) {
  auto is_bound = [&](const std::string& v) {
    return std::find(bound.begin(), bound.end(), v) != bound.end();
  };
  if (f.kind == FormulaKind::Atom) {
    for (auto& t : f.args)
      if (t.variable && !is_bound(t.name) &&
          std::find(out.begin(), out.end(), t.name) == out.end())
        out.push_back(t.name);
    return;
  }
  if (f.kind == FormulaKind::ForAll || f.kind == FormulaKind::Exists) {
    size_t mark = bound.size();
    bound.insert(bound.end(), f.vars.begin(), f.vars.end());
    collect_free(f.children[0], bound, out);
    bound.resize(mark);
    return;
  }
  for (auto& c : f.children) collect_free(c, bound, out);
}

}  // namespace

std::vector<std::string> Formula::free_variables() const {
  std::vector<std::string> bound, out;
  collect_free(*this, bound, out);
  return out;
}

const Predicate* KnowledgeBase::find_predicate(std::string_view name) const {
  for (auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

bool KnowledgeBase::has_constant(std::string_view c) const {
  return std::find(constants.begin(), constants.end(), c) != constants.end();
}

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view s, int line) {
  std::vector<Token> out;
  size_t i = 0;
  auto col = [&](size_t at) { return static_cast<int>(at) + 1; };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '#') break;
    size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), line, col(start)});
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), line, col(start)});
      continue;
    }
    if (s.substr(i, 2) == "->") {
      out.push_back({Tok::Sym, "->", line, col(i)});
      i += 2;
      continue;
    }
    // UTF-8 logic symbols
    static const std::pair<std::string_view, std::string_view> unicode[] = {
        {"\xC2\xAC", "~"},         {"\xE2\x88\xA7", "&"},      {"\xE2\x88\xA8", "|"},
        {"\xE2\x86\x92", "->"},    {"\xE2\x88\x80", "forall"}, {"\xE2\x88\x83", "exists"}};
    bool matched = false;
    for (auto& [u, a] : unicode) {
      if (s.substr(i, u.size()) == u) {
        out.push_back({a.size() > 2 ? Tok::Ident : Tok::Sym, std::string(a), line, col(i)});
        i += u.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("~&|()[],.^@:/-").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), line, col(i)});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", line,
                     col(i));
  }
  out.push_back({Tok::End, "", line, col(s.size())});
  return out;
}

struct Item {
  Formula f;
  double weight = 1.0;
  bool weighted = false;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const std::set<std::string>& constants)
      : t_(std::move(toks)), constants_(constants) {}

  const Token& peek() const { return t_[pos_]; }
  bool at_end() const { return t_[pos_].kind == Tok::End; }
  bool is_sym(std::string_view s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool is_ident(std::string_view s) const {
    return peek().kind == Tok::Ident && peek().text == s;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }

  Token take() { return t_[pos_++]; }

  void expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return take().text;
  }

  double number() {
    bool neg = false;
    if (is_sym("-")) {
      neg = true;
      ++pos_;
    }
    if (peek().kind != Tok::Number) fail("expected number");
    auto tok = take();
    double v = 0;
    auto [p, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
    if (ec != std::errc() || p != tok.text.data() + tok.text.size())
      throw ParseError("malformed number '" + tok.text + "'", tok.line, tok.col);
    return neg ? -v : v;
  }

  Bounds bounds() {
    auto& start = peek();
    int line = start.line, col = start.col;
    expect_sym("[");
    double l = number();
    expect_sym(",");
    double u = number();
    expect_sym("]");
    if (!(l >= 0.0 && l <= 1.0 && u >= 0.0 && u <= 1.0))
      throw ParseError("bounds must lie in [0,1]", line, col);
    if (l > u) throw ParseError("lower bound exceeds upper bound", line, col);
    return {l, u};
  }

  Formula formula() {
    Item it = implies();
    return plain(std::move(it));
  }

 private:
  Formula plain(Item it) {
    if (it.weighted) fail("operand weight outside a weighted connective");
    return std::move(it.f);
  }

  std::optional<double> bias_suffix() {
    if (!is_sym("@")) return std::nullopt;
    ++pos_;
    double b = number();
    if (!(b >= 0.0) || !std::isfinite(b)) fail("bias must be finite and nonnegative");
    return b;
  }

  Item implies() {
    Item lhs = disj();
    if (!is_sym("->")) return lhs;
    ++pos_;
    auto b = bias_suffix();
    Item rhs = implies();
    Item out;
    out.f = Formula::connective(FormulaKind::Implies, {std::move(lhs.f), std::move(rhs.f)},
                                {lhs.weight, rhs.weight}, b.value_or(1.0));
    return out;
  }

  Item chain(FormulaKind kind, std::string_view op, Item (Parser::*next)()) {
    Item first = (this->*next)();
    if (!is_sym(op)) return first;
    std::vector<Formula> kids;
    std::vector<double> ws;
    std::optional<double> bias;
    kids.push_back(std::move(first.f));
    ws.push_back(first.weight);
    while (is_sym(op)) {
      ++pos_;
      if (auto b = bias_suffix()) {
        if (bias && *bias != *b) fail("conflicting biases in one connective chain");
        bias = b;
      }
      Item it = (this->*next)();
      kids.push_back(std::move(it.f));
      ws.push_back(it.weight);
    }
    Item out;
    out.f = Formula::connective(kind, std::move(kids), std::move(ws), bias.value_or(1.0));
    return out;
  }

  Item disj() { return chain(FormulaKind::Or, "|", &Parser::conj); }
  Item conj() { return chain(FormulaKind::And, "&", &Parser::weighted); }

  Item weighted() {
    Item it;
    it.f = unary();
    if (is_sym("^")) {
      ++pos_;
      double w = number();
      if (!(w >= 0.0) || !std::isfinite(w)) fail("weight must be finite and nonnegative");
      it.weight = w;
      it.weighted = true;
    }
    return it;
  }

  Formula unary() {
    if (is_sym("~")) {
      ++pos_;
      return Formula::negation(unary());
    }
    return primary();
  }

  Formula primary() {
    if (is_sym("(")) {
      ++pos_;
      Formula f = formula();
      expect_sym(")");
      return f;
    }
    if (is_ident("forall") || is_ident("exists")) {
      auto kind = take().text == "forall" ? FormulaKind::ForAll : FormulaKind::Exists;
      std::vector<std::string> vars;
      while (peek().kind == Tok::Ident) vars.push_back(take().text);
      if (vars.empty()) fail("quantifier needs at least one variable");
      expect_sym(".");
      Formula body = formula();
      return Formula::quantifier(kind, std::move(vars), std::move(body));
    }
    if (peek().kind != Tok::Ident) fail("expected formula");
    std::string name = take().text;
    std::vector<Term> args;
    if (is_sym("(")) {
      ++pos_;
      if (!is_sym(")")) {
        for (;;) {
          std::string a = ident();
          args.push_back({a, constants_.count(a) == 0});
          if (is_sym(",")) {
            ++pos_;
            continue;
          }
          break;
        }
      }
      expect_sym(")");
    }
    return Formula::atom(std::move(name), std::move(args));
  }

  std::vector<Token> t_;
  size_t pos_ = 0;
  const std::set<std::string>& constants_;
};

bool needs_parens(const Formula& f) {
  return f.is_connective() || f.kind == FormulaKind::ForAll || f.kind == FormulaKind::Exists;
}

void format_into(const Formula& f, std::string& out) {
  switch (f.kind) {
    case FormulaKind::Atom:
      out += f.name;
      if (!f.args.empty()) {
        out += '(';
        for (size_t i = 0; i < f.args.size(); ++i) {
          if (i) out += ',';
          out += f.args[i].name;
        }
        out += ')';
      }
      return;
    case FormulaKind::Not:
      out += '~';
      if (needs_parens(f.children[0])) {
        out += '(';
        format_into(f.children[0], out);
        out += ')';
      } else {
        format_into(f.children[0], out);
      }
      return;
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      out += f.kind == FormulaKind::ForAll ? "forall" : "exists";
      for (auto& v : f.vars) out += ' ' + v;
      out += ". ";
      format_into(f.children[0], out);
      return;
    default: break;
  }
  std::string op = f.kind == FormulaKind::And ? "&" : f.kind == FormulaKind::Or ? "|" : "->";
  for (size_t i = 0; i < f.children.size(); ++i) {
    if (i) {
      out += ' ' + op;
      if (i == 1 && f.bias != 1.0) out += '@' + format_number(f.bias);
      out += ' ';
    }
    const Formula& c = f.children[i];
    bool wrap = needs_parens(c) || (c.kind == FormulaKind::Not && f.weights[i] != 1.0 &&
                                    needs_parens(c.children[0]));
    if (wrap) out += '(';
    format_into(c, out);
    if (wrap) out += ')';
    if (f.weights[i] != 1.0) out += '^' + format_number(f.weights[i]);
  }
}

void check_atoms(Formula& f, KnowledgeBase& kb, int line) {
  if (f.kind == FormulaKind::Atom) {
    int arity = static_cast<int>(f.args.size());
    if (auto* p = kb.find_predicate(f.name)) {
      if (p->arity != arity)
        throw ParseError("predicate " + f.name + " has arity " + std::to_string(p->arity) +
                             ", used with " + std::to_string(arity),
                         line, 1);
    } else {
      kb.predicates.push_back({f.name, arity});
    }
    return;
  }
  for (auto& c : f.children) check_atoms(c, kb, line);
}

}  // namespace

Formula parse_formula(std::string_view text, const std::set<std::string>& constants) {
  Parser p(lex(text, 1), constants);
  Formula f = p.formula();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return f;
}

Formula binary_decompose(const Formula& f) {
  Formula out = f;
  for (auto& c : out.children) c = binary_decompose(c);
  if ((f.kind == FormulaKind::And || f.kind == FormulaKind::Or) && out.children.size() > 2) {
    Formula acc = Formula::connective(f.kind, {out.children[0], out.children[1]},
                                      {out.weights[0], out.weights[1]}, f.bias);
    for (size_t i = 2; i < out.children.size(); ++i)
      acc = Formula::connective(f.kind, {std::move(acc), out.children[i]}, {1.0, out.weights[i]},
                                f.bias);
    return acc;
  }
  return out;
}

KnowledgeBase parse_kb(std::string_view text, const ParseOptions& opts) {
  KnowledgeBase kb;
  std::vector<std::vector<Token>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      auto toks = lex(line, n);
      if (toks.size() > 1) lines.push_back(std::move(toks));
    }
  }

  std::set<std::string> constants;
  auto add_constant = [&](const std::string& c) {
    if (constants.insert(c).second) kb.constants.push_back(c);
  };

  // Declarations first so that formulas can tell constants from variables.
  for (auto& toks : lines) {
    const std::string& kw = toks[0].text;
    if (toks[0].kind != Tok::Ident) throw ParseError("expected a statement keyword", toks[0].line, toks[0].col);
    if (kw == "const") {
      Parser p(toks, constants);
      p.take();
      while (!p.at_end()) add_constant(p.ident());
    } else if (kw == "pred") {
      Parser p(toks, constants);
      p.take();
      std::string name = p.ident();
      p.expect_sym("/");
      double a = p.number();
      if (a < 0 || a != static_cast<int>(a)) p.fail("arity must be a nonnegative integer");
      if (!p.at_end()) p.fail("unexpected trailing input");
      if (auto* existing = kb.find_predicate(name)) {
        if (existing->arity != static_cast<int>(a))
          throw ParseError("predicate " + name + " redeclared with a different arity",
                           toks[0].line, toks[0].col);
      } else {
        kb.predicates.push_back({name, static_cast<int>(a)});
      }
    }
  }
  // Fact arguments are constants by definition.
  for (auto& toks : lines) {
    if (toks[0].text != "fact") continue;
    for (size_t i = 1; i + 1 < toks.size(); ++i)
      if (toks[i].kind == Tok::Ident && (toks[i - 1].text == "(" || toks[i - 1].text == ","))
        add_constant(toks[i].text);
  }

  for (auto& toks : lines) {
    const std::string kw = toks[0].text;
    if (kw == "const" || kw == "pred") continue;
    Parser p(toks, constants);
    p.take();
    int line = toks[0].line;
    if (kw == "axiom") {
      Axiom ax;
      ax.id = p.ident();
      p.expect_sym(":");
      ax.formula = p.formula();
      if (p.is_sym(":")) {
        p.take();
        ax.bounds = p.bounds();
      }
      if (!p.at_end()) p.fail("unexpected trailing input");
      if (opts.require_closed) {
        auto fv = ax.formula.free_variables();
        if (!fv.empty())
          throw ParseError("axiom " + ax.id + " has unbound variable " + fv[0], line, 1);
      }
      check_atoms(ax.formula, kb, line);
      if (opts.binary) ax.formula = binary_decompose(ax.formula);
      kb.axioms.push_back(std::move(ax));
    } else if (kw == "query") {
      Query q;
      q.id = p.ident();
      p.expect_sym(":");
      q.formula = p.formula();
      if (!p.at_end()) p.fail("unexpected trailing input");
      check_atoms(q.formula, kb, line);
      if (opts.binary) q.formula = binary_decompose(q.formula);
      kb.queries.push_back(std::move(q));
    } else if (kw == "fact") {
      Formula a = p.formula();
      if (a.kind != FormulaKind::Atom) throw ParseError("a fact must be a ground atom", line, 1);
      Fact fact;
      fact.predicate = a.name;
      for (auto& t : a.args) fact.args.push_back(t.name);
      if (p.is_sym(":")) {
        p.take();
        fact.bounds = p.bounds();
      }
      if (!p.at_end()) p.fail("unexpected trailing input");
      check_atoms(a, kb, line);
      auto dup = std::find_if(kb.facts.begin(), kb.facts.end(), [&](const Fact& f) {
        return f.predicate == fact.predicate && f.args == fact.args;
      });
      if (dup != kb.facts.end())
        dup->bounds = aggregate(dup->bounds, fact.bounds);
      else
        kb.facts.push_back(std::move(fact));
    } else {
      throw ParseError("unknown statement '" + kw + "'", line, toks[0].col);
    }
  }
  return kb;
}

KnowledgeBase load_kb(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_kb(ss.str(), opts);
}

std::string format(const Formula& f) {
  std::string out;
  format_into(f, out);
  return out;
}

std::string format(const KnowledgeBase& kb) {
  std::string out;
  for (auto& p : kb.predicates) out += "pred " + p.name + "/" + std::to_string(p.arity) + "\n";
  if (!kb.constants.empty()) {
    out += "const";
    for (auto& c : kb.constants) out += " " + c;
    out += "\n";
  }
  auto bounds = [](Bounds b) {
    return "[" + format_number(b.lower) + "," + format_number(b.upper) + "]";
  };
  for (auto& a : kb.axioms) out += "axiom " + a.id + " : " + format(a.formula) + " : " + bounds(a.bounds) + "\n";
  for (auto& f : kb.facts) {
    out += "fact " + f.predicate;
    if (!f.args.empty()) {
      out += "(";
      for (size_t i = 0; i < f.args.size(); ++i) out += (i ? "," : "") + f.args[i];
      out += ")";
    }
    out += " : " + bounds(f.bounds) + "\n";
  }
  for (auto& q : kb.queries) out += "query " + q.id + " : " + format(q.formula) + "\n";
  return out;
}

}  // namespace lnn
