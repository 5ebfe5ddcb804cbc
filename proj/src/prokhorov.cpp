#include "pdmetric/prokhorov.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pdmetric/matching.hpp"

namespace pdmetric {

ParamFunction ParamFunction::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  bool increasing = false;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const double c = coefficients[i];
    if (!std::isfinite(c) || c < 0) throw std::invalid_argument("polynomial coefficients must be finite and >= 0");
    if (i > 0 && c > 0) increasing = true;
  }
  if (coefficients.front() != 0.0) throw std::invalid_argument("constant coefficient c0 must be 0");
  if (!increasing) throw std::invalid_argument("polynomial must have a positive coefficient of degree >= 1");
  ParamFunction f;
  f.form_ = Form::polynomial;
  while (coefficients.back() == 0.0) coefficients.pop_back();
  f.coefficients_ = std::move(coefficients);
  return f;
}

ParamFunction ParamFunction::power(double scale, double exponent) {
  if (!(scale > 0) || !std::isfinite(scale) || !(exponent > 0) || !std::isfinite(exponent)) {
    throw std::invalid_argument("power function needs finite c > 0 and q > 0");
  }
  ParamFunction f;
  f.form_ = Form::power;
  f.scale_ = scale;
  f.exponent_ = exponent;
  return f;
}

ParamFunction ParamFunction::constant(long k) {
  if (k < 1) throw std::invalid_argument("constant function needs an integer k >= 1");
  ParamFunction f;
  f.form_ = Form::constant;
  f.constant_ = k;
  return f;
}

namespace {

double parse_decimal(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

ParamFunction ParamFunction::parse(std::string_view text) {
  if (text.starts_with("poly:")) {
    std::vector<double> coefficients;
    std::string_view rest = text.substr(5);
    while (true) {
      const auto comma = rest.find(',');
      coefficients.push_back(parse_decimal(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return polynomial(std::move(coefficients));
  }
  if (text.starts_with("const:")) {
    const auto digits = text.substr(6);
    long k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
      throw std::invalid_argument("malformed integer in '" + std::string(text) + "'");
    }
    return constant(k);
  }
  throw std::invalid_argument("parameter function must be poly:c0,c1,... or const:k, got '" + std::string(text) + "'");
}

double ParamFunction::operator()(double t) const {
  switch (form_) {
    case Form::constant:
      return static_cast<double>(constant_);
    case Form::power:
      return scale_ * std::pow(t, exponent_);
    case Form::polynomial:
      break;
  }
  double value = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) value = value * t + *it;
  return value;
}

std::string ParamFunction::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (form_) {
    case Form::constant:
      os << "const:" << constant_;
      break;
    case Form::power:
      os << scale_ << "*t^" << exponent_;
      break;
    case Form::polynomial:
      os << "poly:";
      for (std::size_t i = 0; i < coefficients_.size(); ++i) os << (i ? "," : "") << coefficients_[i];
      break;
  }
  return os.str();
}

double eval_f(const ParamFunction& f, double t) {
  if (!(t >= 0)) throw std::invalid_argument("f is defined on t >= 0");
  return f(t);
}

double inverse_f(const ParamFunction& f, double y) {
  if (f.form() == ParamFunction::Form::constant) throw std::invalid_argument("a constant function has no inverse");
  if (!(y >= 0)) throw std::invalid_argument("inverse_f needs y >= 0");
  if (y == 0) return 0.0;

  const double inf = std::numeric_limits<double>::infinity();
  double t = 0.0;
  const auto& c = f.coefficients();
  const bool monomial =
      f.form() == ParamFunction::Form::power || std::count_if(c.begin(), c.end(), [](double v) { return v > 0; }) == 1;
  if (monomial) {
    double scale = 0.0, exponent = 0.0;
    if (f.form() == ParamFunction::Form::power) {
      scale = f.power_scale();
      exponent = f.power_exponent();
    } else {
      exponent = static_cast<double>(c.size() - 1);
      scale = c.back();
    }
    t = exponent == 1.0 ? y / scale : std::pow(y / scale, 1.0 / exponent);
  } else {
    double lo = 0.0, hi = 1.0;
    while (f(hi) < y) {
      lo = hi;
      hi *= 2;
      if (std::isinf(hi)) throw std::domain_error("inverse_f: bracket overflow");
    }
    while (true) {
      const double mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      (f(mid) < y ? lo : hi) = mid;
    }
    t = hi;
  }
  // Snap to the least double with f(t) >= y.
  while (f(t) < y) t = std::nextafter(t, inf);
  for (int i = 0; i < 64 && t > 0; ++i) {
    const double below = std::nextafter(t, 0.0);
    if (f(below) < y) break;
    t = below;
  }
  return t;
}

std::vector<double> prokhorov_candidates(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                         const ParamFunction& f, GroundMetric metric) {
  auto values = candidate_distances(x, y, metric);
  if (f.form() != ParamFunction::Form::constant) {
    const std::size_t n = x.off_diagonal().size() + y.off_diagonal().size();
    for (std::size_t k = 0; k <= n; ++k) values.push_back(inverse_f(f, static_cast<double>(k)));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
  }
  return values;
}

double prokhorov_distance(const PersistenceDiagram& x, const PersistenceDiagram& y, const ParamFunction& f,
                          GroundMetric metric) {
  const auto candidates = prokhorov_candidates(x, y, f, metric);
  ThresholdMatcher matcher(x, y, metric);
  const std::size_t n = matcher.vertex_count();
  const bool strict = f.form() == ParamFunction::Form::constant;
  auto beyond = [&](double t) {
    const auto d = static_cast<double>(n - matcher.max_matching_size(t));
    return strict ? d < f(t) : d <= f(t);
  };
  // The last candidate is >= every distance, so D vanishes there and the
  // predicate holds.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (beyond(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

double kth_bottleneck(const PersistenceDiagram& x, const PersistenceDiagram& y, long k, GroundMetric metric) {
  if (k < 1) throw std::invalid_argument("k-th bottleneck needs k >= 1");
  return prokhorov_distance(x, y, ParamFunction::constant(k), metric);
}

}  // namespace pdmetric
