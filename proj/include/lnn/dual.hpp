#pragma once

// Forward-mode scalar with sparse partials keyed by integer ids.  Ids are
// whatever the caller seeds: tape variable ids inside the engine, or the
// x_id/w_id/bias_id scheme for the standalone semantics functions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <boost/container/small_vector.hpp>

namespace lnn {

struct Dual {
  using Partials = boost::container::small_vector<std::pair<int, double>, 6>;

  double v = 0.0;
  Partials d;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: constants convert implicitly

  static Dual variable(double value, int id) {
    Dual r(value);
    if (id >= 0) r.d.emplace_back(id, 1.0);
    return r;
  }

  double partial(int id) const {
    for (auto& [k, g] : d)
      if (k == id) return g;
    return 0.0;
  }

  bool tracked() const { return !d.empty(); }
};

namespace detail {

inline void accumulate(Dual::Partials& out, const Dual::Partials& in, double s) {
  if (s == 0.0) return;
  for (auto& [k, g] : in) {
    auto it = std::find_if(out.begin(), out.end(),
                           [k = k](auto& p) { return p.first == k; });
    if (it == out.end())
      out.emplace_back(k, g * s);
    else
      it->second += g * s;
  }
}

// value with partials sa*a.d + sb*b.d
inline Dual linear(double value, const Dual& a, double sa, const Dual& b, double sb) {
  Dual r(value);
  r.d = a.d;
  for (auto& p : r.d) p.second *= sa;
  accumulate(r.d, b.d, sb);
  return r;
}

inline Dual scaled(double value, const Dual& a, double s) {
  Dual r(value);
  if (s != 0.0) {
    r.d = a.d;
    for (auto& p : r.d) p.second *= s;
  }
  return r;
}

}  // namespace detail

inline Dual operator+(const Dual& a, const Dual& b) {
  return detail::linear(a.v + b.v, a, 1.0, b, 1.0);
}
inline Dual operator-(const Dual& a, const Dual& b) {
  return detail::linear(a.v - b.v, a, 1.0, b, -1.0);
}
inline Dual operator-(const Dual& a) { return detail::scaled(-a.v, a, -1.0); }
inline Dual operator*(const Dual& a, const Dual& b) {
  return detail::linear(a.v * b.v, a, b.v, b, a.v);
}
inline Dual operator/(const Dual& a, const Dual& b) {
  return detail::linear(a.v / b.v, a, 1.0 / b.v, b, -a.v / (b.v * b.v));
}
inline Dual operator+(const Dual& a, double b) { return detail::scaled(a.v + b, a, 1.0); }
inline Dual operator+(double a, const Dual& b) { return b + a; }
inline Dual operator-(const Dual& a, double b) { return detail::scaled(a.v - b, a, 1.0); }
inline Dual operator-(double a, const Dual& b) { return detail::scaled(a - b.v, b, -1.0); }
inline Dual operator*(const Dual& a, double b) { return detail::scaled(a.v * b, a, b); }
inline Dual operator*(double a, const Dual& b) { return b * a; }
inline Dual operator/(const Dual& a, double b) { return detail::scaled(a.v / b, a, 1.0 / b); }

inline Dual& operator+=(Dual& a, const Dual& b) {
  a.v += b.v;
  detail::accumulate(a.d, b.d, 1.0);
  return a;
}
inline Dual& operator-=(Dual& a, const Dual& b) {
  a.v -= b.v;
  detail::accumulate(a.d, b.d, -1.0);
  return a;
}

// Ties go to the first argument so that gradient routing is deterministic.
inline const Dual& dmin(const Dual& a, const Dual& b) { return b.v < a.v ? b : a; }
inline const Dual& dmax(const Dual& a, const Dual& b) { return b.v > a.v ? b : a; }

inline Dual dexp(const Dual& a) {
  double e = std::exp(a.v);
  return detail::scaled(e, a, e);
}
inline Dual dlog(const Dual& a) { return detail::scaled(std::log(a.v), a, 1.0 / a.v); }

// Clamp whose derivative outside [lo, hi] is the original one scaled by a.
inline Dual clamp(const Dual& x, double lo, double hi, double a = 1.0) {
  if (x.v < lo) return detail::scaled(lo, x, a);
  if (x.v > hi) return detail::scaled(hi, x, a);
  return x;
}
inline Dual clamp01(const Dual& x, double a = 1.0) { return clamp(x, 0.0, 1.0, a); }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace lnn
