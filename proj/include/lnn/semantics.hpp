#pragma once

// Activation families: values, inverses and partial derivatives.
//
// The `kernel` namespace works on Dual numbers and is what the inference
// engine uses.  The free functions below it are the plain-double entry points;
// their partials are keyed by x_id(i), w_id(i) and bias_id(i).

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lnn/dual.hpp"

namespace lnn {

enum class Family { Lukasiewicz, Godel, Tailored, Logistic, Probability };
enum class Form { Conjunction, Disjunction };

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view s);

struct ConnectiveParams {
  double bias = 1.0;
  std::vector<double> weights;  // empty means unit weights
  double alpha = 1.0;
  Family family = Family::Lukasiewicz;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using DualValue = Dual;

constexpr int x_id(int i) { return i; }
constexpr int w_id(int i) { return 1000 + i; }
constexpr int bias_id(int i = 0) { return 2000 + i; }

namespace kernel {

using Span = std::span<const Dual>;

Dual luk_and(const Dual& beta, Span w, Span x, double a = 1.0);
Dual luk_or(const Dual& beta, Span w, Span x, double a = 1.0);
Dual luk_implies(const Dual& beta, const Dual& wx, const Dual& wy, const Dual& x,
                 const Dual& y, double a = 1.0);

Dual godel_and(Span beta, Span w, Span x, double a = 1.0);
Dual godel_or(Span beta, Span w, Span x, double a = 1.0);
Dual godel_implies(const Dual& beta, const Dual& wx, const Dual& wy, const Dual& x,
                   const Dual& y, double a = 1.0);

// Four critical points (0,0), (x_F,1-a), (x_T,a), (x_max,1).
struct Shape {
  std::array<Dual, 4> x;
  std::array<double, 4> y;
  Form form = Form::Disjunction;
};

Shape tailored_shape(Form form, double alpha, Span w);
Dual tailored_eval(const Shape& shape, const Dual& s, double a = 1.0);
// Preimage of y; on flat pieces `upper` picks the sup instead of the inf.
Dual tailored_inverse(const Shape& shape, const Dual& y, bool upper);

struct Logistic {
  Dual A, B;
};
Logistic logistic_coefficients(Form form, double alpha, Span w);
Dual logistic_eval(const Logistic& c, const Dual& s);
Dual logistic_inverse(const Logistic& c, const Dual& y);

}  // namespace kernel

DualValue luk_and(const ConnectiveParams& p, std::span<const double> x, double a = 1.0);
DualValue luk_or(const ConnectiveParams& p, std::span<const double> x, double a = 1.0);
DualValue luk_residuum(const ConnectiveParams& p, double x, double y, double a = 1.0);

DualValue godel_and(std::span<const double> beta, std::span<const double> w,
                    std::span<const double> x, double a = 1.0);
DualValue godel_or(std::span<const double> beta, std::span<const double> w,
                   std::span<const double> x, double a = 1.0);
DualValue godel_residuum(const ConnectiveParams& p, double x, double y, double a = 1.0);

struct CriticalPoints {
  double x_false, x_true, x_max;
};
CriticalPoints tailored_points(const ConnectiveParams& p, Form form);
// True when alpha satisfies alpha >= sum(w) / (sum(w) + w_max).
bool tailored_alpha_valid(const ConnectiveParams& p);
DualValue tailored_eval(const ConnectiveParams& p, Form form, double s);
double tailored_inverse(const ConnectiveParams& p, Form form, double y, bool upper = false);

struct LogisticCoefficients {
  double A, B;
};
LogisticCoefficients logistic_coefficients(const ConnectiveParams& p, Form form);
DualValue logistic_eval(const ConnectiveParams& p, Form form, double s);
double logistic_inverse(const ConnectiveParams& p, Form form, double y);

DualValue transparent_clamp(const DualValue& x, double lo, double hi, double a);

}  // namespace lnn
