#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdmetric {

// A point (birth, death) of a persistence diagram. Always finite with
// death >= birth; points with death == birth lie on the diagonal.
struct PlanePoint {
  double birth = 0.0;
  double death = 0.0;

  // Throws std::invalid_argument on non-finite coordinates or death < birth.
  static PlanePoint make(double birth, double death);

  double persistence() const { return death - birth; }
  bool on_diagonal() const { return death == birth; }

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

// Order of the L_p norm used as ground metric on the plane. Defaults to L-infinity.
class GroundMetric {
 public:
  GroundMetric() = default;

  static GroundMetric infinity() { return GroundMetric{}; }
  // Throws std::invalid_argument unless order >= 1 (an infinite order is allowed).
  static GroundMetric lp(double order);
  // Accepts "inf" / "infinity" or a decimal >= 1.
  static GroundMetric parse(std::string_view text);

  bool is_infinity() const { return infinite_; }
  double order() const;
  std::string to_string() const;

  friend bool operator==(const GroundMetric&, const GroundMetric&) = default;

 private:
  bool infinite_ = true;
  double order_ = 0.0;
};

// Finite multiset of points; multiplicity is encoded by repetition.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  explicit PersistenceDiagram(std::vector<PlanePoint> points);
  PersistenceDiagram(std::initializer_list<PlanePoint> points);

  std::span<const PlanePoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  // Points strictly above the diagonal, in input order.
  std::span<const PlanePoint> off_diagonal() const { return off_diagonal_; }
  // Diagonal projections of off_diagonal(), index-aligned with it.
  std::vector<PlanePoint> projections() const;

  friend bool operator==(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<PlanePoint> points_;
  std::vector<PlanePoint> off_diagonal_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string message, std::string source = {});
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }
  const std::string& source() const { return source_; }

 private:
  std::size_t line_;
  std::string message_;
  std::string source_;
};

// Reads `birth<sep>death` lines (sep: whitespace or comma). Blank lines and
// lines starting with '#' are skipped. Throws ParseError with the 1-based line.
PersistenceDiagram parse_diagram(std::istream& in);
PersistenceDiagram parse_diagram_string(std::string_view text);
// Throws std::runtime_error if the file cannot be opened; ParseError message
// is prefixed with the path.
PersistenceDiagram read_diagram_file(const std::string& path);

// Writes one `birth death` line per point with round-trip precision.
void write_diagram(std::ostream& out, const PersistenceDiagram& diagram);

double ground_distance(const PlanePoint& a, const PlanePoint& b, const GroundMetric& metric);

// Nearest diagonal point ((b+d)/2, (b+d)/2).
PlanePoint project_to_diagonal(const PlanePoint& a);

// Distance from a point to its diagonal projection. Under L-infinity this
// is (death - birth) / 2.
double diagonal_distance(const PlanePoint& a, const GroundMetric& metric);

}  // namespace pdmetric
