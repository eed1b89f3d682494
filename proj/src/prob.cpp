#include "lnn/prob.hpp"

#include <vector>

namespace lnn {
namespace prob {

namespace {

Dual cap1(const Dual& x) { return x.v > 1.0 ? Dual(1.0) : x; }
Dual floor0(const Dual& x) { return x.v < 0.0 ? Dual(0.0) : x; }

}  // namespace

DBounds upward(Connective c, std::span<const DBounds> in) {
  switch (c) {
    case Connective::Or: {
      Dual lo = in[0].L, sum = 0.0;
      for (auto& b : in) {
        lo = dmax(lo, b.L);
        sum += b.U;
      }
      return {lo, cap1(sum)};
    }
    case Connective::And: {
      Dual miss = 0.0, hi = in[0].U;
      for (auto& b : in) {
        miss += 1.0 - b.L;
        hi = dmin(hi, b.U);
      }
      return {floor0(1.0 - miss), hi};
    }
    case Connective::Implies: {
      const DBounds &x = in[0], &y = in[1];
      return {dmax(1.0 - x.U, y.L), cap1(1.0 - x.L + y.U)};
    }
  }
  return {0.0, 1.0};
}

DBounds downward(Connective c, const DBounds& out, std::span<const DBounds> in, size_t j) {
  switch (c) {
    case Connective::Or: {
      Dual others = 0.0;
      for (size_t i = 0; i < in.size(); ++i)
        if (i != j) others += in[i].U;
      return {floor0(out.L - others), out.U};
    }
    case Connective::And: {
      Dual others = 0.0;
      for (size_t i = 0; i < in.size(); ++i)
        if (i != j) others += 1.0 - in[i].L;
      return {out.L, cap1(out.U + others)};
    }
    case Connective::Implies: {
      const DBounds &x = in[0], &y = in[1];
      if (j == 0) return {1.0 - out.U, cap1(1.0 + y.U - out.L)};
      return {floor0(x.L + out.L - 1.0), out.U};
    }
  }
  return {0.0, 1.0};
}

}  // namespace prob

namespace {

std::vector<DBounds> lift(std::span<const Bounds> in) {
  std::vector<DBounds> r;
  for (auto& b : in) r.push_back({b.lower, b.upper});
  return r;
}

}  // namespace

Bounds prob_upward(Connective c, std::span<const Bounds> in) {
  auto d = lift(in);
  auto r = prob::upward(c, d);
  return {r.L.v, r.U.v};
}

Bounds prob_downward(Connective c, size_t j, std::span<const Bounds> in, Bounds out) {
  auto d = lift(in);
  auto r = prob::downward(c, {out.lower, out.upper}, d, j);
  return {r.L.v, r.U.v};
}

}  // namespace lnn
