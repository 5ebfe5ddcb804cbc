#include "pdmetric/matching.hpp"

#include <algorithm>
#include <stdexcept>

namespace pdmetric {

ThresholdMatcher::ThresholdMatcher(const PersistenceDiagram& x, const PersistenceDiagram& y, GroundMetric metric)
    : metric_(metric),
      xs_(x.off_diagonal().begin(), x.off_diagonal().end()),
      ys_(y.off_diagonal().begin(), y.off_diagonal().end()),
      nx_(xs_.size()),
      ny_(ys_.size()) {
  x_diag_.reserve(nx_);
  y_diag_.reserve(ny_);
  for (const auto& p : xs_) x_diag_.push_back(diagonal_distance(p, metric_));
  for (const auto& p : ys_) y_diag_.push_back(diagonal_distance(p, metric_));
  mate_left_.assign(nx_ + ny_, kFree);
  mate_right_.assign(nx_ + ny_, kFree);

  std::vector<KdTree::Entry> entries;
  entries.reserve(ny_);
  for (std::size_t j = 0; j < ny_; ++j) entries.push_back({ys_[j], j});
  y_index_ = KdTree(std::move(entries), metric_);
}

bool ThresholdMatcher::is_edge(std::size_t left, std::size_t right, double threshold) const {
  if (left < nx_) {
    if (right < ny_) return ground_distance(xs_[left], ys_[right], metric_) <= threshold;
    return right - ny_ == left && x_diag_[left] <= threshold;
  }
  const std::size_t j = left - nx_;
  if (right < ny_) return right == j && y_diag_[j] <= threshold;
  return true;
}

std::size_t ThresholdMatcher::max_matching_size(double threshold) {
  if (!(threshold >= 0)) throw std::invalid_argument("threshold must be nonnegative");
  const bool lowered = threshold < threshold_;
  threshold_ = threshold;
  if (lowered) drop_invalid_pairs();
  while (matched_ < nx_ + ny_ && run_phase()) {
  }
  return matched_;
}

MatchingResult ThresholdMatcher::matching() const {
  MatchingResult result;
  for (std::size_t u = 0; u < mate_left_.size(); ++u) {
    if (mate_left_[u] != kFree) result.pairs.emplace_back(u, mate_left_[u]);
  }
  result.cardinality = result.pairs.size();
  return result;
}

void ThresholdMatcher::drop_invalid_pairs() {
  for (std::size_t u = 0; u < mate_left_.size(); ++u) {
    const auto v = mate_left_[u];
    if (v != kFree && !is_edge(u, v, threshold_)) {
      mate_left_[u] = kFree;
      mate_right_[v] = kFree;
      --matched_;
    }
  }
}

bool ThresholdMatcher::run_phase() {
  if (!layer_search()) return false;

  const auto layers = static_cast<std::size_t>(augmenting_layer_) + 1;
  std::vector<std::vector<KdTree::Entry>> layer_entries(layers);
  layer_x_proj_.assign(layers, {});
  for (std::size_t j = 0; j < ny_; ++j) {
    const int k = right_layer_[j];
    if (k != kUnreached && k <= augmenting_layer_) layer_entries[k].push_back({ys_[j], j});
  }
  for (std::size_t i = 0; i < nx_; ++i) {
    const int k = right_layer_[ny_ + i];
    if (k != kUnreached && k <= augmenting_layer_) layer_x_proj_[k].push_back(i);
  }
  layer_y_index_.clear();
  layer_y_index_.reserve(layers);
  for (auto& entries : layer_entries) layer_y_index_.emplace_back(std::move(entries), metric_);
  right_used_.assign(nx_ + ny_, 0);

  bool augmented = false;
  for (std::size_t u = 0; u < nx_ + ny_; ++u) {
    if (mate_left_[u] == kFree && left_layer_[u] == 0 && augment_from(u)) {
      ++matched_;
      augmented = true;
    }
  }
  return augmented;
}

// Breadth-first layering from all free left vertices. Each right vertex is
// reached once: points of Y are deleted from the index as they are reported,
// projections of X leave the pool.
bool ThresholdMatcher::layer_search() {
  const std::size_t n = nx_ + ny_;
  left_layer_.assign(n, kUnreached);
  right_layer_.assign(n, kUnreached);
  y_index_.restore_all();
  std::size_t proj_pool_next = 0;

  std::vector<std::size_t> frontier, next;
  for (std::size_t u = 0; u < n; ++u) {
    if (mate_left_[u] == kFree) {
      left_layer_[u] = 0;
      frontier.push_back(u);
    }
  }

  for (int level = 0; !frontier.empty(); ++level) {
    bool found_free = false;
    next.clear();
    for (const auto u : frontier) {
      query_buffer_.clear();
      if (u < nx_) {
        y_index_.extract_all(xs_[u], threshold_, query_buffer_);
        const auto own = ny_ + u;
        if (right_layer_[own] == kUnreached && x_diag_[u] <= threshold_) query_buffer_.push_back(own);
      } else {
        const std::size_t j = u - nx_;
        if (right_layer_[j] == kUnreached && y_diag_[j] <= threshold_ && y_index_.erase(j)) {
          query_buffer_.push_back(j);
        }
        for (; proj_pool_next < nx_; ++proj_pool_next) {
          const auto v = ny_ + proj_pool_next;
          if (right_layer_[v] == kUnreached) query_buffer_.push_back(v);
        }
      }
      for (const auto v : query_buffer_) {
        right_layer_[v] = level;
        const auto w = mate_right_[v];
        if (w == kFree) {
          found_free = true;
        } else {
          left_layer_[w] = level + 1;
          next.push_back(w);
        }
      }
    }
    if (found_free) {
      augmenting_layer_ = level;
      return true;
    }
    frontier.swap(next);
  }
  return false;
}

std::size_t ThresholdMatcher::next_layer_neighbor(std::size_t left) {
  const int k = left_layer_[left];
  auto& index = layer_y_index_[k];
  if (left < nx_) {
    if (auto j = index.find_one(xs_[left], threshold_)) {
      index.erase(*j);
      right_used_[*j] = 1;
      return *j;
    }
    const auto own = ny_ + left;
    if (right_layer_[own] == k && !right_used_[own] && x_diag_[left] <= threshold_) {
      right_used_[own] = 1;
      return own;
    }
    return kFree;
  }
  const std::size_t j = left - nx_;
  if (right_layer_[j] == k && !right_used_[j] && y_diag_[j] <= threshold_) {
    index.erase(j);
    right_used_[j] = 1;
    return j;
  }
  auto& pool = layer_x_proj_[k];
  while (!pool.empty()) {
    const auto v = ny_ + pool.back();
    pool.pop_back();
    if (!right_used_[v]) {
      right_used_[v] = 1;
      return v;
    }
  }
  return kFree;
}

// Depth-first search for one augmenting path in the layered graph, without
// recursion. Every right vertex touched is consumed for the rest of the phase.
bool ThresholdMatcher::augment_from(std::size_t root) {
  std::vector<std::size_t> lefts{root};
  std::vector<std::size_t> rights;
  while (!lefts.empty()) {
    const auto u = lefts.back();
    const auto v = next_layer_neighbor(u);
    if (v == kFree) {
      lefts.pop_back();
      if (!rights.empty()) rights.pop_back();
      continue;
    }
    const auto w = mate_right_[v];
    if (w == kFree) {
      rights.push_back(v);
      for (std::size_t i = 0; i < rights.size(); ++i) {
        mate_left_[lefts[i]] = rights[i];
        mate_right_[rights[i]] = lefts[i];
      }
      return true;
    }
    if (left_layer_[u] < augmenting_layer_ && left_layer_[w] == left_layer_[u] + 1) {
      rights.push_back(v);
      lefts.push_back(w);
    }
  }
  return false;
}

std::size_t max_matching_size(const PersistenceDiagram& x, const PersistenceDiagram& y, double threshold,
                              GroundMetric metric) {
  if (!(threshold >= 0)) throw std::invalid_argument("threshold must be nonnegative");
  ThresholdMatcher matcher(x, y, metric);
  return matcher.max_matching_size(threshold);
}

std::vector<double> candidate_distances(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                        GroundMetric metric) {
  const auto xs = x.off_diagonal();
  const auto ys = y.off_diagonal();
  std::vector<double> values;
  values.reserve(1 + xs.size() * ys.size() + xs.size() + ys.size());
  values.push_back(0.0);
  for (const auto& a : xs) {
    values.push_back(diagonal_distance(a, metric));
    for (const auto& b : ys) values.push_back(ground_distance(a, b, metric));
  }
  for (const auto& b : ys) values.push_back(diagonal_distance(b, metric));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace pdmetric
