#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pdmetric/diagram.hpp"

namespace pdmetric {

// Square cost matrix over the augmented diagrams, rows U = X0 + proj(Y0),
// columns V = Y0 + proj(X0) (same numbering as the threshold graph). Entry
// (i, j) holds d^p for admissible pairs: x_i with y_j, x_i with its own
// projection, y_j with its own projection; projection-projection pairs cost
// 0. All other entries hold `forbidden`, which exceeds the cost of any
// assignment built from admissible pairs only.
struct CostMatrix {
  std::size_t side = 0;
  std::vector<double> entries;  // row-major
  double forbidden = 0.0;

  double operator()(std::size_t row, std::size_t col) const { return entries[row * side + col]; }
};

CostMatrix wasserstein_cost_matrix(const PersistenceDiagram& x, const PersistenceDiagram& y, double order,
                                   GroundMetric metric = {});

struct Assignment {
  std::vector<std::size_t> column_of_row;
  double cost = 0.0;  // sum of matrix entries along the assignment, in ascending order
};

// Minimum-cost perfect assignment (shortest augmenting paths with potentials), O(n^3).
Assignment solve_assignment(const CostMatrix& cost);

// W_p(X, Y). Throws std::invalid_argument unless 1 <= p < inf.
double wasserstein_distance(const PersistenceDiagram& x, const PersistenceDiagram& y, double order,
                            GroundMetric metric = {});

// W_inf(X, Y) = inf{t > 0 : D_{X,Y}(t) = 0}.
double bottleneck_distance(const PersistenceDiagram& x, const PersistenceDiagram& y, GroundMetric metric = {});

// Diagram whose points are the midpoints of the pairs of an optimal W_1
// assignment (a point matched to the diagonal contributes the midpoint
// towards its projection).
PersistenceDiagram midpoint_diagram(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                    GroundMetric metric = {});

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct BoundsReport {
  std::vector<BoundCheck> checks;

  static constexpr double kSlack = 1e-9;
  // Appends a check; holds iff lhs <= rhs + kSlack.
  void add(std::string name, double lhs, double rhs);
  bool all_hold() const;
};

// Evaluates the comparison inequalities between profile, f-Prokhorov and
// Wasserstein distances on (X, Y), with f = c * t^q:
//   D(t) <= W_p^p / t^p              at the midpoint of every profile step
//   pi_f <= W_p^(p/(p+q)) c^(-1/(p+q))
//   W_q^q <= pi_q^q (M^q + N - 1)                    (q >= 1)
//   W_q^q <= W_p^(pq/(p+q)) (M^q + N - 1)            (q >= 1)
//   W_1 <= W_2^(2/3) (M + N - 1)
// where pi_q uses f = t^q, M is the largest candidate distance and
// N = |X0| + |Y0|. Throws std::invalid_argument unless p >= 1, q > 0, c > 0.
BoundsReport audit_bounds(const PersistenceDiagram& x, const PersistenceDiagram& y, double p, double q, double c,
                          GroundMetric metric = {});

}  // namespace pdmetric
