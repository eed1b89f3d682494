#include "lnn/semantics.hpp"

#include <cmath>

namespace lnn {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Lukasiewicz: return "lukasiewicz";
    case Family::Godel: return "godel";
    case Family::Tailored: return "tailored";
    case Family::Logistic: return "logistic";
    case Family::Probability: return "probability";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view s) {
  for (auto f : {Family::Lukasiewicz, Family::Godel, Family::Tailored, Family::Logistic,
                 Family::Probability})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

namespace kernel {

Dual luk_and(const Dual& beta, Span w, Span x, double a) {
  Dual acc = beta;
  for (size_t i = 0; i < x.size(); ++i) acc -= w[i] * (1.0 - x[i]);
  return clamp01(acc, a);
}

Dual luk_or(const Dual& beta, Span w, Span x, double a) {
  Dual acc = 1.0 - beta;
  for (size_t i = 0; i < x.size(); ++i) acc += w[i] * x[i];
  return clamp01(acc, a);
}

Dual luk_implies(const Dual& beta, const Dual& wx, const Dual& wy, const Dual& x,
                 const Dual& y, double a) {
  return clamp01(1.0 - beta + wx * (1.0 - x) + wy * y, a);
}

Dual godel_and(Span beta, Span w, Span x, double a) {
  Dual best = beta[0] - w[0] * (1.0 - x[0]);
  for (size_t i = 1; i < x.size(); ++i) {
    Dual t = beta[i] - w[i] * (1.0 - x[i]);
    if (t.v < best.v) best = std::move(t);
  }
  return clamp01(best, a);
}

Dual godel_or(Span beta, Span w, Span x, double a) {
  Dual best = 1.0 - beta[0] + w[0] * x[0];
  for (size_t i = 1; i < x.size(); ++i) {
    Dual t = 1.0 - beta[i] + w[i] * x[i];
    if (t.v > best.v) best = std::move(t);
  }
  return clamp01(best, a);
}

Dual godel_implies(const Dual& beta, const Dual& wx, const Dual& wy, const Dual& x,
                   const Dual& y, double a) {
  Dual xs = clamp01(beta - wx * (1.0 - x), a);
  Dual ys = clamp01(1.0 - beta + wy * y, a);
  if (xs.v > ys.v) return ys;
  return Dual(1.0);
}

Shape tailored_shape(Form form, double alpha, Span w) {
  Dual sum = 0.0;
  Dual wmax = w.empty() ? Dual(0.0) : w[0];
  for (size_t i = 0; i < w.size(); ++i) {
    sum += w[i];
    if (w[i].v > wmax.v) wmax = w[i];
  }
  Shape s;
  s.form = form;
  s.y = {0.0, 1.0 - alpha, alpha, 1.0};
  if (form == Form::Disjunction)
    s.x = {Dual(0.0), sum * (1.0 - alpha), wmax * alpha, sum};
  else
    s.x = {Dual(0.0), sum - wmax * alpha, sum * alpha, sum};
  return s;
}

namespace {

bool has_width(const Shape& s, int k) { return s.x[k + 1].v > s.x[k].v; }

Dual on_segment(const Shape& s, int k, const Dual& at) {
  Dual slope = (s.y[k + 1] - s.y[k]) / (s.x[k + 1] - s.x[k]);
  return s.y[k] + (at - s.x[k]) * slope;
}

}  // namespace

Dual tailored_eval(const Shape& s, const Dual& in, double a) {
  int first = -1, last = -1, pick = -1;
  for (int k = 0; k < 3; ++k) {
    if (!has_width(s, k)) continue;
    if (first < 0) first = k;
    last = k;
    if (pick < 0 && in.v >= s.x[k].v && in.v < s.x[k + 1].v) pick = k;
  }
  if (first < 0) return Dual(s.form == Form::Conjunction ? 1.0 : 0.0);
  if (pick < 0) pick = in.v < s.x[first].v ? first : last;
  return clamp01(on_segment(s, pick, in), a);
}

Dual tailored_inverse(const Shape& s, const Dual& yin, bool upper) {
  const Dual y = clamp01(yin, 1.0);
  int step = upper ? -1 : 1;
  int k = upper ? 2 : 0;
  int below = -1;  // last segment entirely under y, for the jump case
  for (int i = 0; i < 3; ++i, k += step) {
    if (!has_width(s, k)) continue;
    const double y0 = s.y[k], y1 = s.y[k + 1];
    if (y.v >= y0 && y.v <= y1) {
      if (y1 == y0) return upper ? s.x[k + 1] : s.x[k];
      Dual slope = (s.x[k + 1] - s.x[k]) / (y1 - y0);
      return s.x[k] + (y - y0) * slope;
    }
    if (y1 < y.v && (below < 0 || s.x[k + 1].v > s.x[below + 1].v)) below = k;
  }
  if (below >= 0) return s.x[below + 1];
  return s.x[0];
}

Logistic logistic_coefficients(Form form, double alpha, Span w) {
  if (!(alpha < 1.0))
    throw ConfigError("logistic activation needs alpha < 1");
  Shape s = tailored_shape(form, alpha, w);
  Dual span = s.x[1] - s.x[2];
  if (span.v == 0.0) throw ConfigError("logistic activation needs x_F != x_T");
  Logistic c;
  c.A = 2.0 * std::log((1.0 - alpha) / alpha) / span;
  c.B = std::log(alpha / (1.0 - alpha)) + c.A * s.x[1];
  return c;
}

Dual logistic_eval(const Logistic& c, const Dual& s) {
  Dual e = dexp(c.B - c.A * s);
  return 1.0 / (1.0 + e);
}

Dual logistic_inverse(const Logistic& c, const Dual& y) {
  if (y.v <= 0.0) return Dual(-kInf);
  if (y.v >= 1.0) return Dual(kInf);
  return (c.B - dlog((1.0 - y) / y)) / c.A;
}

}  // namespace kernel

namespace {

std::vector<Dual> seeds(std::span<const double> v, int (*id)(int)) {
  std::vector<Dual> r;
  r.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) r.push_back(Dual::variable(v[i], id(static_cast<int>(i))));
  return r;
}

int xid(int i) { return x_id(i); }
int wid(int i) { return w_id(i); }
int bid(int i) { return bias_id(i); }

std::vector<double> weights_of(const ConnectiveParams& p, size_t n) {
  if (p.weights.empty()) return std::vector<double>(n, 1.0);
  return p.weights;
}

}  // namespace

DualValue luk_and(const ConnectiveParams& p, std::span<const double> x, double a) {
  auto w = weights_of(p, x.size());
  auto xs = seeds(x, xid), ws = seeds(w, wid);
  return kernel::luk_and(Dual::variable(p.bias, bias_id()), ws, xs, a);
}

DualValue luk_or(const ConnectiveParams& p, std::span<const double> x, double a) {
  auto w = weights_of(p, x.size());
  auto xs = seeds(x, xid), ws = seeds(w, wid);
  return kernel::luk_or(Dual::variable(p.bias, bias_id()), ws, xs, a);
}

DualValue luk_residuum(const ConnectiveParams& p, double x, double y, double a) {
  auto w = weights_of(p, 2);
  return kernel::luk_implies(Dual::variable(p.bias, bias_id()), Dual::variable(w[0], w_id(0)),
                             Dual::variable(w[1], w_id(1)), Dual::variable(x, x_id(0)),
                             Dual::variable(y, x_id(1)), a);
}

DualValue godel_and(std::span<const double> beta, std::span<const double> w,
                    std::span<const double> x, double a) {
  auto bs = seeds(beta, bid), ws = seeds(w, wid), xs = seeds(x, xid);
  return kernel::godel_and(bs, ws, xs, a);
}

DualValue godel_or(std::span<const double> beta, std::span<const double> w,
                   std::span<const double> x, double a) {
  auto bs = seeds(beta, bid), ws = seeds(w, wid), xs = seeds(x, xid);
  return kernel::godel_or(bs, ws, xs, a);
}

DualValue godel_residuum(const ConnectiveParams& p, double x, double y, double a) {
  auto w = weights_of(p, 2);
  return kernel::godel_implies(Dual::variable(p.bias, bias_id()), Dual::variable(w[0], w_id(0)),
                               Dual::variable(w[1], w_id(1)), Dual::variable(x, x_id(0)),
                               Dual::variable(y, x_id(1)), a);
}

CriticalPoints tailored_points(const ConnectiveParams& p, Form form) {
  auto ws = seeds(p.weights, wid);
  auto s = kernel::tailored_shape(form, p.alpha, ws);
  return {s.x[1].v, s.x[2].v, s.x[3].v};
}

bool tailored_alpha_valid(const ConnectiveParams& p) {
  double sum = 0.0, wmax = 0.0;
  for (double w : p.weights) {
    sum += w;
    wmax = std::max(wmax, w);
  }
  if (sum + wmax <= 0.0) return p.alpha > 0.5;
  return p.alpha > 0.5 && p.alpha >= sum / (sum + wmax) - 1e-12;
}

DualValue tailored_eval(const ConnectiveParams& p, Form form, double s) {
  auto ws = seeds(p.weights, wid);
  auto shape = kernel::tailored_shape(form, p.alpha, ws);
  return kernel::tailored_eval(shape, Dual::variable(s, x_id(0)));
}

double tailored_inverse(const ConnectiveParams& p, Form form, double y, bool upper) {
  std::vector<Dual> ws(p.weights.begin(), p.weights.end());
  auto shape = kernel::tailored_shape(form, p.alpha, ws);
  return kernel::tailored_inverse(shape, Dual(y), upper).v;
}

LogisticCoefficients logistic_coefficients(const ConnectiveParams& p, Form form) {
  std::vector<Dual> ws(p.weights.begin(), p.weights.end());
  auto c = kernel::logistic_coefficients(form, p.alpha, ws);
  return {c.A.v, c.B.v};
}

DualValue logistic_eval(const ConnectiveParams& p, Form form, double s) {
  auto ws = seeds(p.weights, wid);
  auto c = kernel::logistic_coefficients(form, p.alpha, ws);
  return kernel::logistic_eval(c, Dual::variable(s, x_id(0)));
}

double logistic_inverse(const ConnectiveParams& p, Form form, double y) {
  std::vector<Dual> ws(p.weights.begin(), p.weights.end());
  auto c = kernel::logistic_coefficients(form, p.alpha, ws);
  return kernel::logistic_inverse(c, Dual(y)).v;
}

DualValue transparent_clamp(const DualValue& x, double lo, double hi, double a) {
  return clamp(x, lo, hi, a);
}

}  // namespace lnn
