#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pdmetric/diagram.hpp"

namespace pdmetric {

// The function f in pi_f(X, Y) = inf{t > 0 : D_{X,Y}(t) < f(t)}.
//
// Polynomial form: nonnegative coefficients c0..cm with c0 = 0 and some
// ci > 0, hence strictly increasing, superadditive and f(0) = 0 (metric mode).
// Power form: c * t^q with real c, q > 0 (same properties for q >= 1).
// Constant form: f = k for an integer k >= 1; pi_f is then the k-th
// bottleneck, a query rather than a metric.
class ParamFunction {
 public:
  enum class Form { polynomial, power, constant };

  // Throws std::invalid_argument unless c0 == 0, all ci >= 0 and finite, and
  // some ci > 0.
  static ParamFunction polynomial(std::vector<double> coefficients);
  static ParamFunction power(double scale, double exponent);
  static ParamFunction constant(long k);

  // `poly:c0,c1,...,cm` or `const:k`.
  static ParamFunction parse(std::string_view text);

  Form form() const { return form_; }
  bool is_metric() const { return form_ != Form::constant; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  long constant_value() const { return constant_; }
  double power_scale() const { return scale_; }
  double power_exponent() const { return exponent_; }

  double operator()(double t) const;

  std::string to_string() const;

 private:
  Form form_ = Form::polynomial;
  std::vector<double> coefficients_;
  double scale_ = 1.0, exponent_ = 1.0;
  long constant_ = 0;
};

// f(t). Throws std::invalid_argument if t < 0.
double eval_f(const ParamFunction& f, double t);

// The least double t with f(t) >= y, i.e. the root of f(t) = y rounded up.
// Closed form for monomials, bisection on a doubling bracket otherwise.
// Throws std::invalid_argument for the constant form or y < 0.
double inverse_f(const ParamFunction& f, double y);

// Sorted candidate set for the binary search: the candidate distances plus
// f^{-1}(k) for k = 0..|X0|+|Y0| (polynomial and power forms only).
std::vector<double> prokhorov_candidates(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                         const ParamFunction& f, GroundMetric metric = {});

// pi_f(X, Y) by binary search over prokhorov_candidates.
//
// A candidate t lies at or beyond pi_f iff D(t) <= f(t) for strictly
// increasing continuous f (the infimum may be approached from the right
// only), and iff D(t) < k for constant f = k.
double prokhorov_distance(const PersistenceDiagram& x, const PersistenceDiagram& y, const ParamFunction& f,
                          GroundMetric metric = {});

// inf{t > 0 : D(t) < k}; k = 1 is the bottleneck distance. Throws
// std::invalid_argument if k < 1.
double kth_bottleneck(const PersistenceDiagram& x, const PersistenceDiagram& y, long k, GroundMetric metric = {});

}  // namespace pdmetric
