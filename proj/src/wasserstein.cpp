#include "pdmetric/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pdmetric/matching.hpp"
#include "pdmetric/profile.hpp"
#include "pdmetric/prokhorov.hpp"

namespace pdmetric {

namespace {

void check_order(double order) {
  if (!(order >= 1.0) || !std::isfinite(order)) {
    throw std::invalid_argument("Wasserstein order must satisfy 1 <= p < inf");
  }
}

// Lexicographic order on the sorted off-diagonal points.
bool canonically_before(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  auto sorted = [](const PersistenceDiagram& d) {
    std::vector<std::pair<double, double>> v;
    for (const auto& p : d.off_diagonal()) v.emplace_back(p.birth, p.death);
    std::sort(v.begin(), v.end());
    return v;
  };
  return sorted(a) < sorted(b);
}

}  // namespace

CostMatrix wasserstein_cost_matrix(const PersistenceDiagram& x, const PersistenceDiagram& y, double order,
                                   GroundMetric metric) {
  check_order(order);
  const auto xs = x.off_diagonal();
  const auto ys = y.off_diagonal();
  const std::size_t nx = xs.size(), ny = ys.size(), n = nx + ny;

  CostMatrix cost;
  cost.side = n;
  cost.entries.assign(n * n, -1.0);
  double largest = 0.0;
  auto set = [&](std::size_t row, std::size_t col, double distance) {
    const double value = std::pow(distance, order);
    cost.entries[row * n + col] = value;
    largest = std::max(largest, value);
  };
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) set(i, j, ground_distance(xs[i], ys[j], metric));
    set(i, ny + i, diagonal_distance(xs[i], metric));
  }
  for (std::size_t j = 0; j < ny; ++j) {
    set(nx + j, j, diagonal_distance(ys[j], metric));
    for (std::size_t i = 0; i < nx; ++i) cost.entries[(nx + j) * n + ny + i] = 0.0;
  }
  cost.forbidden = static_cast<double>(n) * largest + 1.0;
  for (auto& entry : cost.entries) {
    if (entry < 0) entry = cost.forbidden;
  }
  return cost;
}

Assignment solve_assignment(const CostMatrix& cost) {
  const std::size_t n = cost.side;
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is the virtual start of each augmenting path.
  std::vector<double> row_potential(n + 1, 0.0), col_potential(n + 1, 0.0), min_slack(n + 1);
  std::vector<std::size_t> row_of_col(n + 1, 0), previous(n + 1, 0);
  std::vector<char> visited(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    row_of_col[0] = row;
    std::size_t col = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[col] = 1;
      const std::size_t r = row_of_col[col];
      double delta = inf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (visited[j]) continue;
        const double slack = cost(r - 1, j - 1) - row_potential[r] - col_potential[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          previous[j] = col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (visited[j]) {
          row_potential[row_of_col[j]] += delta;
          col_potential[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col = next;
    } while (row_of_col[col] != 0);
    do {
      const std::size_t prev = previous[col];
      row_of_col[col] = row_of_col[prev];
      col = prev;
    } while (col != 0);
  }

  Assignment result;
  result.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.column_of_row[row_of_col[j] - 1] = j - 1;
  // Ascending summation makes the cost independent of the row order.
  std::vector<double> chosen(n);
  for (std::size_t i = 0; i < n; ++i) chosen[i] = cost(i, result.column_of_row[i]);
  std::sort(chosen.begin(), chosen.end());
  for (double c : chosen) result.cost += c;
  return result;
}

double wasserstein_distance(const PersistenceDiagram& x, const PersistenceDiagram& y, double order,
                            GroundMetric metric) {
  // Near-ties between optimal assignments may round differently; a fixed
  // argument order keeps the result exactly symmetric.
  if (canonically_before(y, x)) return wasserstein_distance(y, x, order, metric);
  const auto cost = wasserstein_cost_matrix(x, y, order, metric);
  const auto assignment = solve_assignment(cost);
  for (std::size_t i = 0; i < cost.side; ++i) {
    if (cost(i, assignment.column_of_row[i]) == cost.forbidden) {
      throw std::logic_error("optimal assignment used a forbidden pair");
    }
  }
  return std::pow(assignment.cost, 1.0 / order);
}

double bottleneck_distance(const PersistenceDiagram& x, const PersistenceDiagram& y, GroundMetric metric) {
  return kth_bottleneck(x, y, 1, metric);
}

PersistenceDiagram midpoint_diagram(const PersistenceDiagram& x, const PersistenceDiagram& y, GroundMetric metric) {
  const auto xs = x.off_diagonal();
  const auto ys = y.off_diagonal();
  const std::size_t nx = xs.size(), ny = ys.size();
  const auto assignment = solve_assignment(wasserstein_cost_matrix(x, y, 1.0, metric));
  auto midpoint = [](const PlanePoint& a, const PlanePoint& b) {
    return PlanePoint{(a.birth + b.birth) / 2, (a.death + b.death) / 2};
  };
  std::vector<PlanePoint> points;
  for (std::size_t row = 0; row < nx + ny; ++row) {
    const auto col = assignment.column_of_row[row];
    if (row < nx) {
      const auto& a = xs[row];
      points.push_back(col < ny ? midpoint(a, ys[col]) : midpoint(a, project_to_diagonal(a)));
    } else if (col < ny) {
      points.push_back(midpoint(ys[col], project_to_diagonal(ys[col])));
    }
  }
  return PersistenceDiagram(std::move(points));
}

void BoundsReport::add(std::string name, double lhs, double rhs) {
  checks.push_back({std::move(name), lhs, rhs, lhs <= rhs + kSlack});
}

bool BoundsReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.holds; });
}

BoundsReport audit_bounds(const PersistenceDiagram& x, const PersistenceDiagram& y, double p, double q, double c,
                          GroundMetric metric) {
  check_order(p);
  if (!(q > 0) || !std::isfinite(q) || !(c > 0) || !std::isfinite(c)) {
    throw std::invalid_argument("audit needs q > 0 and c > 0");
  }
  auto label = [](const std::string& base, std::initializer_list<std::pair<const char*, double>> params) {
    std::ostringstream os;
    os.precision(6);
    os << base << " [";
    bool first = true;
    for (const auto& [key, value] : params) {
      os << (first ? "" : ", ") << key << "=" << value;
      first = false;
    }
    os << "]";
    return os.str();
  };

  BoundsReport report;
  const auto n = static_cast<double>(x.off_diagonal().size() + y.off_diagonal().size());
  const auto candidates = candidate_distances(x, y, metric);
  const double max_distance = candidates.back();
  const double w_p = wasserstein_distance(x, y, p, metric);

  const auto profile = full_profile(x, y, metric);
  const auto& steps = profile.steps();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double t = i + 1 < steps.size() ? (steps[i].threshold + steps[i + 1].threshold) / 2
                                          : (steps[i].threshold > 0 ? 2 * steps[i].threshold : 1.0);
    report.add(label("profile <= W_p^p / t^p", {{"p", p}, {"t", t}}), static_cast<double>(steps[i].value),
               std::pow(w_p, p) / std::pow(t, p));
  }

  const double pi_f = prokhorov_distance(x, y, ParamFunction::power(c, q), metric);
  report.add(label("pi_f <= W_p^(p/(p+q)) c^(-1/(p+q))", {{"p", p}, {"q", q}, {"c", c}}), pi_f,
             std::pow(w_p, p / (p + q)) * std::pow(c, -1.0 / (p + q)));

  if (q >= 1) {
    const double w_q = wasserstein_distance(x, y, q, metric);
    const double size_factor = std::pow(max_distance, q) + n - 1;
    const double pi_q = prokhorov_distance(x, y, ParamFunction::power(1.0, q), metric);
    report.add(label("W_q^q <= pi_q^q (M^q + N - 1)", {{"q", q}}), std::pow(w_q, q),
               std::pow(pi_q, q) * size_factor);
    report.add(label("W_q^q <= W_p^(pq/(p+q)) (M^q + N - 1)", {{"p", p}, {"q", q}}), std::pow(w_q, q),
               std::pow(w_p, p * q / (p + q)) * size_factor);
  }

  const double w_1 = wasserstein_distance(x, y, 1.0, metric);
  const double w_2 = wasserstein_distance(x, y, 2.0, metric);
  report.add("W_1 <= W_2^(2/3) (M + N - 1)", w_1, std::pow(w_2, 2.0 / 3.0) * (max_distance + n - 1));
  return report;
}

}  // namespace pdmetric
