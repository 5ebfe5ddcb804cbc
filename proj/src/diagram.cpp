#include "pdmetric/diagram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace pdmetric {

PlanePoint PlanePoint::make(double birth, double death) {
  if (!std::isfinite(birth) || !std::isfinite(death)) {
    throw std::invalid_argument("diagram point coordinates must be finite");
  }
  if (death < birth) {
    throw std::invalid_argument("diagram point has death < birth");
  }
  return PlanePoint{birth, death};
}

GroundMetric GroundMetric::lp(double order) {
  if (std::isinf(order) && order > 0) return infinity();
  if (!(order >= 1.0)) {
    throw std::invalid_argument("ground metric order must be >= 1 or inf");
  }
  GroundMetric m;
  m.infinite_ = false;
  m.order_ = order;
  return m;
}

GroundMetric GroundMetric::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("invalid ground metric order '" + std::string(text) + "'");
  }
  return lp(value);
}

double GroundMetric::order() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : order_;
}

std::string GroundMetric::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(12);
  os << order_;
  return os.str();
}

PersistenceDiagram::PersistenceDiagram(std::vector<PlanePoint> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    PlanePoint::make(p.birth, p.death);  // validates
    if (!p.on_diagonal()) off_diagonal_.push_back(p);
  }
}

PersistenceDiagram::PersistenceDiagram(std::initializer_list<PlanePoint> points)
    : PersistenceDiagram(std::vector<PlanePoint>(points)) {}

std::vector<PlanePoint> PersistenceDiagram::projections() const {
  std::vector<PlanePoint> out;
  out.reserve(off_diagonal_.size());
  for (const auto& p : off_diagonal_) out.push_back(project_to_diagonal(p));
  return out;
}

ParseError::ParseError(std::size_t line, std::string message, std::string source)
    : std::runtime_error((source.empty() ? "line " : source + ":") + std::to_string(line) + ": " + message),
      line_(line),
      message_(std::move(message)),
      source_(std::move(source)) {}

namespace {

bool is_separator(char c) {
  return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_separator(s.front()) && s.front() != ',') s.remove_prefix(1);
  while (!s.empty() && is_separator(s.back()) && s.back() != ',') s.remove_suffix(1);
  return s;
}

// Splits on runs of whitespace with at most one comma per run.
std::vector<std::string_view> split_fields(std::string_view line, std::size_t line_no) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t start = i;
    while (i < line.size() && !is_separator(line[i])) ++i;
    if (i == start) throw ParseError(line_no, "empty field");
    fields.push_back(line.substr(start, i - start));
    int commas = 0;
    while (i < line.size() && is_separator(line[i])) {
      if (line[i] == ',') ++commas;
      ++i;
    }
    if (commas > 1) throw ParseError(line_no, "empty field");
    if (i == line.size() && commas > 0) throw ParseError(line_no, "trailing separator");
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(line_no, "non-finite value '" + std::string(field) + "'");
  }
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line_no, "malformed number '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line_no, "non-finite value '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

PersistenceDiagram parse_diagram(std::istream& in) {
  std::vector<PlanePoint> points;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_fields(line, line_no);
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected 2 values (birth, death), got " + std::to_string(fields.size()));
    }
    double birth = parse_number(fields[0], line_no);
    double death = parse_number(fields[1], line_no);
    if (death < birth) throw ParseError(line_no, "death < birth");
    points.push_back(PlanePoint{birth, death});
  }
  return PersistenceDiagram(std::move(points));
}

PersistenceDiagram parse_diagram_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_diagram(in);
}

PersistenceDiagram read_diagram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  try {
    return parse_diagram(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path);
  }
}

void write_diagram(std::ostream& out, const PersistenceDiagram& diagram) {
  auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : diagram.points()) out << p.birth << ' ' << p.death << '\n';
  out.precision(old);
}

double ground_distance(const PlanePoint& a, const PlanePoint& b, const GroundMetric& metric) {
  const double dx = std::abs(a.birth - b.birth);
  const double dy = std::abs(a.death - b.death);
  if (metric.is_infinity()) return std::max(dx, dy);
  const double p = metric.order();
  if (p == 1.0) return dx + dy;
  if (p == 2.0) return std::hypot(dx, dy);
  return std::pow(std::pow(dx, p) + std::pow(dy, p), 1.0 / p);
}

PlanePoint project_to_diagonal(const PlanePoint& a) {
  const double mid = (a.birth + a.death) / 2;
  return PlanePoint{mid, mid};
}

double diagonal_distance(const PlanePoint& a, const GroundMetric& metric) {
  return ground_distance(a, project_to_diagonal(a), metric);
}

}  // namespace pdmetric
