#include "lnn/rules.hpp"

#include <cmath>

#include "lnn/prob.hpp"

namespace lnn {

namespace {

using Vec = std::vector<Dual>;

Vec lowers(std::span<const DBounds> in) {
  Vec r;
  r.reserve(in.size());
  for (auto& b : in) r.push_back(b.L);
  return r;
}

Vec uppers(std::span<const DBounds> in) {
  Vec r;
  r.reserve(in.size());
  for (auto& b : in) r.push_back(b.U);
  return r;
}

std::vector<DBounds> negated(std::span<const DBounds> in) {
  std::vector<DBounds> r;
  r.reserve(in.size());
  for (auto& b : in) r.push_back(negate(b));
  return r;
}

// Implication operands rewritten as disjunction operands (~x, y).
std::vector<DBounds> as_disjuncts(std::span<const DBounds> in) {
  return {negate(in[0]), in[1]};
}

Dual weighted_sum(std::span<const Dual> w, const Vec& x, size_t skip = SIZE_MAX) {
  Dual s = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    if (i != skip) s += w[i] * x[i];
  return s;
}

// ---------------------------------------------------------------- Lukasiewicz

DBounds luk_up(Connective c, const RuleContext& ctx, std::span<const DBounds> in) {
  const double a = ctx.grad_scale;
  switch (c) {
    case Connective::And:
      return {kernel::luk_and(ctx.bias, ctx.weights, lowers(in), a),
              kernel::luk_and(ctx.bias, ctx.weights, uppers(in), a)};
    case Connective::Or:
      return {kernel::luk_or(ctx.bias, ctx.weights, lowers(in), a),
              kernel::luk_or(ctx.bias, ctx.weights, uppers(in), a)};
    case Connective::Implies: {
      auto& w = ctx.weights;
      return {kernel::luk_implies(ctx.bias, w[0], w[1], in[0].U, in[1].L, a),
              kernel::luk_implies(ctx.bias, w[0], w[1], in[0].L, in[1].U, a)};
    }
  }
  return {0.0, 1.0};
}

// Disjunction downward rule for operand j.
DBounds luk_or_down(const RuleContext& ctx, const DBounds& out, std::span<const DBounds> in,
                    size_t j) {
  auto& w = ctx.weights;
  const double a = ctx.grad_scale;
  DBounds r{0.0, 1.0};
  if (out.L.v > 1.0 - ctx.alpha) {
    Dual others = 0.0;
    for (size_t i = 0; i < in.size(); ++i)
      if (i != j) others += w[i] * in[i].U;
    r.L = clamp01((out.L - 1.0 + ctx.bias - others) / w[j], a);
  }
  if (out.U.v < ctx.alpha) {
    Dual others = 0.0;
    for (size_t i = 0; i < in.size(); ++i)
      if (i != j) others += w[i] * in[i].L;
    r.U = clamp01((out.U - 1.0 + ctx.bias - others) / w[j], a);
  }
  return r;
}

// ---------------------------------------------------------------------- Godel

DBounds godel_up(Connective c, const RuleContext& ctx, std::span<const DBounds> in) {
  const double a = ctx.grad_scale;
  Vec beta(in.size(), ctx.bias);
  switch (c) {
    case Connective::And:
      return {kernel::godel_and(beta, ctx.weights, lowers(in), a),
              kernel::godel_and(beta, ctx.weights, uppers(in), a)};
    case Connective::Or:
      return {kernel::godel_or(beta, ctx.weights, lowers(in), a),
              kernel::godel_or(beta, ctx.weights, uppers(in), a)};
    case Connective::Implies: {
      auto& w = ctx.weights;
      return {kernel::godel_implies(ctx.bias, w[0], w[1], in[0].U, in[1].L, a),
              kernel::godel_implies(ctx.bias, w[0], w[1], in[0].L, in[1].U, a)};
    }
  }
  return {0.0, 1.0};
}

DBounds godel_and_down(const RuleContext& ctx, const DBounds& out, std::span<const DBounds> in,
                       size_t j) {
  auto& w = ctx.weights;
  const Dual& beta = ctx.bias;
  const double a = ctx.grad_scale;
  DBounds r{0.0, 1.0};
  if (out.L.v > 1.0 - ctx.alpha && out.L.v > 0.0)
    r.L = clamp01(1.0 - (beta - out.L) / w[j], a);
  if (out.U.v < ctx.alpha && out.U.v < 1.0) {
    bool others_above = true;
    for (size_t i = 0; i < in.size() && others_above; ++i)
      if (i != j && !((beta - w[i] * (1.0 - in[i].L)).v > out.U.v)) others_above = false;
    if (others_above) r.U = clamp01(1.0 - (beta - out.U) / w[j], a);
  }
  return r;
}

DBounds godel_or_down(const RuleContext& ctx, const DBounds& out, std::span<const DBounds> in,
                      size_t j) {
  auto& w = ctx.weights;
  const Dual& beta = ctx.bias;
  const double a = ctx.grad_scale;
  DBounds r{0.0, 1.0};
  if (out.U.v < ctx.alpha && out.U.v < 1.0) r.U = clamp01((out.U - 1.0 + beta) / w[j], a);
  if (out.L.v > 1.0 - ctx.alpha && out.L.v > 0.0) {
    bool others_below = true;
    for (size_t i = 0; i < in.size() && others_below; ++i)
      if (i != j && !((1.0 - beta + w[i] * in[i].U).v < out.L.v)) others_below = false;
    if (others_below) r.L = clamp01((out.L - 1.0 + beta) / w[j], a);
  }
  return r;
}

// Residuum z = (x' > y') ? y' : 1 with x' = beta - w_x(1-x), y' = 1 - beta + w_y y.
DBounds godel_implies_down(const RuleContext& ctx, const DBounds& out,
                           std::span<const DBounds> in, size_t j) {
  auto& w = ctx.weights;
  const Dual& beta = ctx.bias;
  const double a = ctx.grad_scale;
  auto xs = [&](const Dual& x) { return clamp01(beta - w[0] * (1.0 - x), a); };
  auto ys = [&](const Dual& y) { return clamp01(1.0 - beta + w[1] * y, a); };
  const Dual xL = xs(in[0].L), yL = ys(in[1].L), yU = ys(in[1].U);
  const bool lower_live = out.L.v > 1.0 - ctx.alpha && out.L.v > 0.0;
  const bool upper_live = out.U.v < ctx.alpha && out.U.v < 1.0;
  DBounds r{0.0, 1.0};
  if (j == 1) {
    if (lower_live) {
      Dual l = dmin(xL, out.L);
      if (l.v > 0.0) r.L = clamp01((l - 1.0 + beta) / w[1], a);
    }
    if (upper_live) r.U = clamp01((out.U - 1.0 + beta) / w[1], a);
    return r;
  }
  if (upper_live && yL.v > 0.0) r.L = clamp01(1.0 - (beta - yL) / w[0], a);
  if (lower_live && out.L.v > yU.v && yU.v < 1.0) r.U = clamp01(1.0 - (beta - yU) / w[0], a);
  return r;
}

// ------------------------------------------------------------------- Tailored

Dual tailored_at(const RuleContext& ctx, Form form, std::span<const Dual> w, const Dual& s) {
  auto shape = kernel::tailored_shape(form, ctx.alpha, w);
  return kernel::tailored_eval(shape, s, ctx.grad_scale);
}

DBounds tailored_up(Connective c, const RuleContext& ctx, std::span<const DBounds> in) {
  auto& w = ctx.weights;
  if (c == Connective::Implies) {
    auto d = as_disjuncts(in);
    return {tailored_at(ctx, Form::Disjunction, w, weighted_sum(w, lowers(d))),
            tailored_at(ctx, Form::Disjunction, w, weighted_sum(w, uppers(d)))};
  }
  Form form = c == Connective::And ? Form::Conjunction : Form::Disjunction;
  return {tailored_at(ctx, form, w, weighted_sum(w, lowers(in))),
          tailored_at(ctx, form, w, weighted_sum(w, uppers(in)))};
}

DBounds tailored_inverse_and(const RuleContext& ctx, const DBounds& out,
                             std::span<const DBounds> in, size_t j) {
  auto& w = ctx.weights;
  const double a = ctx.grad_scale;
  auto shape = kernel::tailored_shape(Form::Conjunction, ctx.alpha, w);
  Dual lo = kernel::tailored_inverse(shape, out.L, false);
  Dual hi = kernel::tailored_inverse(shape, out.U, true);
  return {clamp01((lo - weighted_sum(w, uppers(in), j)) / w[j], a),
          clamp01((hi - weighted_sum(w, lowers(in), j)) / w[j], a)};
}

// Upward value of the tautology B = A -> (A & B), A being the other operands.
DBounds tailored_tautology_and(const RuleContext& ctx, const DBounds& out,
                               std::span<const DBounds> in, size_t j) {
  DBounds A;
  if (in.size() == 2) {
    A = in[1 - j];
  } else {
    Vec w_other, lo, hi;
    for (size_t i = 0; i < in.size(); ++i) {
      if (i == j) continue;
      w_other.push_back(ctx.weights[i]);
      lo.push_back(in[i].L);
      hi.push_back(in[i].U);
    }
    A = {tailored_at(ctx, Form::Conjunction, w_other, weighted_sum(w_other, lo)),
         tailored_at(ctx, Form::Conjunction, w_other, weighted_sum(w_other, hi))};
  }
  const Vec unit{1.0, 1.0};
  return {tailored_at(ctx, Form::Disjunction, unit, (1.0 - A.U) + out.L),
          tailored_at(ctx, Form::Disjunction, unit, (1.0 - A.L) + out.U)};
}

DBounds tailored_and_down(const RuleContext& ctx, const DBounds& out, std::span<const DBounds> in,
                          size_t j) {
  DBounds taut = tailored_tautology_and(ctx, out, in, j);
  DBounds inv = tailored_inverse_and(ctx, out, in, j);
  const double alpha = ctx.alpha;
  DBounds r;
  r.U = (taut.U.v >= alpha || taut.U.v >= inv.U.v) ? taut.U : inv.U;
  r.L = (taut.L.v <= 1.0 - alpha || taut.L.v <= inv.L.v) ? taut.L : inv.L;
  return r;
}

// ------------------------------------------------------------------- Logistic

Dual logistic_at(const RuleContext& ctx, Form form, const Dual& s) {
  auto c = kernel::logistic_coefficients(form, ctx.alpha, ctx.weights);
  return kernel::logistic_eval(c, s);
}

DBounds logistic_up(Connective c, const RuleContext& ctx, std::span<const DBounds> in) {
  auto& w = ctx.weights;
  if (c == Connective::Implies) {
    auto d = as_disjuncts(in);
    return {logistic_at(ctx, Form::Disjunction, weighted_sum(w, lowers(d))),
            logistic_at(ctx, Form::Disjunction, weighted_sum(w, uppers(d)))};
  }
  Form form = c == Connective::And ? Form::Conjunction : Form::Disjunction;
  return {logistic_at(ctx, form, weighted_sum(w, lowers(in))),
          logistic_at(ctx, form, weighted_sum(w, uppers(in)))};
}

DBounds logistic_or_down(const RuleContext& ctx, const DBounds& out, std::span<const DBounds> in,
                         size_t j) {
  auto& w = ctx.weights;
  const double a = ctx.grad_scale;
  auto c = kernel::logistic_coefficients(Form::Disjunction, ctx.alpha, w);
  // The inverse is infinite at 0 and 1; the bound then saturates with no gradient.
  auto solve = [&](const Dual& y, const Dual& others) -> Dual {
    Dual s = kernel::logistic_inverse(c, y);
    if (!std::isfinite(s.v)) return s.v > 0 ? 1.0 : 0.0;
    return clamp01((s - others) / w[j], a);
  };
  DBounds r{0.0, 1.0};
  if (out.L.v > 1.0 - ctx.alpha) r.L = solve(out.L, weighted_sum(w, uppers(in), j));
  if (out.U.v < ctx.alpha) r.U = solve(out.U, weighted_sum(w, lowers(in), j));
  return r;
}

// ------------------------------------------------------------------ dispatch

using DownFn = DBounds (*)(const RuleContext&, const DBounds&, std::span<const DBounds>, size_t);

// Lifts a disjunction rule to conjunction and implication through negation.
DBounds via_disjunction(DownFn or_rule, Connective c, const RuleContext& ctx, const DBounds& out,
                        std::span<const DBounds> in, size_t j) {
  switch (c) {
    case Connective::Or: return or_rule(ctx, out, in, j);
    case Connective::And: {
      auto n = negated(in);
      return negate(or_rule(ctx, negate(out), n, j));
    }
    case Connective::Implies: {
      auto d = as_disjuncts(in);
      DBounds r = or_rule(ctx, out, d, j);
      return j == 0 ? negate(r) : r;
    }
  }
  return {0.0, 1.0};
}

// Lifts a conjunction rule to disjunction and implication through negation.
DBounds via_conjunction(DownFn and_rule, Connective c, const RuleContext& ctx, const DBounds& out,
                        std::span<const DBounds> in, size_t j) {
  switch (c) {
    case Connective::And: return and_rule(ctx, out, in, j);
    case Connective::Or: {
      auto n = negated(in);
      return negate(and_rule(ctx, negate(out), n, j));
    }
    case Connective::Implies: {
      auto d = as_disjuncts(in);
      auto n = negated(d);
      DBounds r = negate(and_rule(ctx, negate(out), n, j));
      return j == 0 ? negate(r) : r;
    }
  }
  return {0.0, 1.0};
}

}  // namespace

DBounds upward(Connective c, const RuleContext& ctx, std::span<const DBounds> in) {
  switch (ctx.family) {
    case Family::Lukasiewicz: return luk_up(c, ctx, in);
    case Family::Godel: return godel_up(c, ctx, in);
    case Family::Tailored: return tailored_up(c, ctx, in);
    case Family::Logistic: return logistic_up(c, ctx, in);
    case Family::Probability: return prob::upward(c, in);
  }
  return {0.0, 1.0};
}

DBounds downward(Connective c, const RuleContext& ctx, const DBounds& out,
                 std::span<const DBounds> in, size_t j) {
  if (ctx.family == Family::Probability) return prob::downward(c, out, in, j);
  if (ctx.weights[j].v < ctx.w_min) return {0.0, 1.0};
  switch (ctx.family) {
    case Family::Lukasiewicz: return via_disjunction(luk_or_down, c, ctx, out, in, j);
    case Family::Logistic: return via_disjunction(logistic_or_down, c, ctx, out, in, j);
    case Family::Tailored: return via_conjunction(tailored_and_down, c, ctx, out, in, j);
    case Family::Godel:
      switch (c) {
        case Connective::And: return godel_and_down(ctx, out, in, j);
        case Connective::Or: return godel_or_down(ctx, out, in, j);
        case Connective::Implies: return godel_implies_down(ctx, out, in, j);
      }
      break;
    case Family::Probability: break;
  }
  return {0.0, 1.0};
}

namespace {

struct Plain {
  std::vector<Dual> w;
  std::vector<DBounds> in;
  RuleContext ctx;

  Plain(const ConnectiveParams& p, std::span<const Bounds> bounds, double w_min) {
    for (size_t i = 0; i < bounds.size(); ++i) {
      w.push_back(p.weights.empty() ? 1.0 : p.weights[i]);
      in.push_back({bounds[i].lower, bounds[i].upper});
    }
    ctx.family = p.family;
    ctx.alpha = p.alpha;
    ctx.bias = p.bias;
    ctx.w_min = w_min;
    ctx.weights = w;
  }
};

Bounds plain(const DBounds& b) { return {b.L.v, b.U.v}; }

}  // namespace

Bounds upward(Connective c, const ConnectiveParams& p, std::span<const Bounds> in) {
  Plain q(p, in, 0.0);
  return plain(upward(c, q.ctx, q.in));
}

Bounds downward_or(const ConnectiveParams& p, size_t j, std::span<const Bounds> in, Bounds out,
                   double w_min) {
  Plain q(p, in, w_min);
  return plain(downward(Connective::Or, q.ctx, {out.lower, out.upper}, q.in, j));
}

Bounds downward_and(const ConnectiveParams& p, size_t j, std::span<const Bounds> in, Bounds out,
                    double w_min) {
  Plain q(p, in, w_min);
  return plain(downward(Connective::And, q.ctx, {out.lower, out.upper}, q.in, j));
}

std::pair<Bounds, Bounds> downward_implies(const ConnectiveParams& p, Bounds x, Bounds y,
                                           Bounds out, double w_min) {
  const Bounds in[2] = {x, y};
  Plain q(p, in, w_min);
  DBounds o{out.lower, out.upper};
  return {plain(downward(Connective::Implies, q.ctx, o, q.in, 0)),
          plain(downward(Connective::Implies, q.ctx, o, q.in, 1))};
}

Bounds conditioned_downward(const ConnectiveParams& p, size_t j, std::span<const Bounds> in,
                            Bounds out, double w_min) {
  ConnectiveParams t = p;
  t.family = Family::Tailored;
  return downward_and(t, j, in, out, w_min);
}

Bounds tautology_downward(const ConnectiveParams& p, size_t j, std::span<const Bounds> in,
                          Bounds out) {
  Plain q(p, in, 0.0);
  return plain(tailored_tautology_and(q.ctx, {out.lower, out.upper}, q.in, j));
}

Bounds inverse_downward(const ConnectiveParams& p, size_t j, std::span<const Bounds> in,
                        Bounds out) {
  Plain q(p, in, 0.0);
  return plain(tailored_inverse_and(q.ctx, {out.lower, out.upper}, q.in, j));
}

}  // namespace lnn
