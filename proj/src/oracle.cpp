#include "pdmetric/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pdmetric::oracle {

namespace {

// Pairwise distances between the enumerated left and right lists.
std::vector<std::vector<double>> pair_distances(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                                GroundMetric metric) {
  const auto xs = x.off_diagonal();
  const auto ys = y.off_diagonal();
  const std::size_t n = xs.size() + ys.size();
  if (n > kMaxPoints) throw std::length_error("oracle is limited to |X0| + |Y0| <= 10");

  std::vector<PlanePoint> left(xs.begin(), xs.end()), right(ys.begin(), ys.end());
  for (const auto& b : ys) left.push_back(project_to_diagonal(b));
  for (const auto& a : xs) right.push_back(project_to_diagonal(a));

  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      const bool both_diagonal = u >= xs.size() && v >= ys.size();
      d[u][v] = both_diagonal ? 0.0 : ground_distance(left[u], right[v], metric);
    }
  }
  return d;
}

template <typename Visit>
void for_each_bijection(std::size_t n, Visit visit) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    visit(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

std::vector<std::size_t> brute_profile_values(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                              std::span<const double> thresholds, GroundMetric metric) {
  for (double t : thresholds) {
    if (!(t >= 0)) throw std::invalid_argument("profile value needs t >= 0");
  }
  const auto d = pair_distances(x, y, metric);
  const std::size_t n = d.size();

  std::vector<std::size_t> order(thresholds.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return thresholds[a] < thresholds[b]; });

  std::vector<std::size_t> best(thresholds.size(), n);
  std::vector<double> lengths(n);
  for_each_bijection(n, [&](const std::vector<std::size_t>& perm) {
    for (std::size_t u = 0; u < n; ++u) lengths[u] = d[u][perm[u]];
    std::sort(lengths.begin(), lengths.end());
    // Walk thresholds upwards; `within` counts pairs at distance <= t.
    std::size_t within = 0;
    for (const auto k : order) {
      while (within < n && lengths[within] <= thresholds[k]) ++within;
      best[k] = std::min(best[k], n - within);
    }
  });
  return best;
}

std::size_t brute_profile_value(const PersistenceDiagram& x, const PersistenceDiagram& y, double t,
                                GroundMetric metric) {
  const double thresholds[] = {t};
  return brute_profile_values(x, y, thresholds, metric).front();
}

double brute_prokhorov(const PersistenceDiagram& x, const PersistenceDiagram& y, const ParamFunction& f,
                       GroundMetric metric) {
  const auto candidates = prokhorov_candidates(x, y, f, metric);
  const auto values = brute_profile_values(x, y, candidates, metric);
  const bool strict = f.form() == ParamFunction::Form::constant;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto d = static_cast<double>(values[i]);
    const double bound = f(candidates[i]);
    if (strict ? d < bound : d <= bound) return candidates[i];
  }
  throw std::logic_error("no candidate satisfies the profile predicate");
}

double brute_wasserstein(const PersistenceDiagram& x, const PersistenceDiagram& y, double order,
                         GroundMetric metric) {
  if (!(order >= 1.0) || !std::isfinite(order)) throw std::invalid_argument("Wasserstein order must be >= 1");
  auto d = pair_distances(x, y, metric);
  for (auto& row : d) {
    for (auto& value : row) value = std::pow(value, order);
  }
  const std::size_t n = d.size();
  double best = std::numeric_limits<double>::infinity();
  for_each_bijection(n, [&](const std::vector<std::size_t>& perm) {
    double total = 0.0;
    for (std::size_t u = 0; u < n; ++u) total += d[u][perm[u]];
    best = std::min(best, total);
  });
  return n == 0 ? 0.0 : std::pow(best, 1.0 / order);
}

}  // namespace pdmetric::oracle
