#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "pdmetric/diagram.hpp"
#include "pdmetric/kd_tree.hpp"

namespace pdmetric {

// Vertex numbering of the threshold graph G = (U + V, E) for diagrams X, Y
// with nx, ny off-diagonal points:
//
//   left  U: [0, nx)        the points of X,   [nx, nx+ny) the projections of Y
//   right V: [0, ny)        the points of Y,   [ny, ny+nx) the projections of X
//
// Edges (all with d <= t unless stated otherwise):
//   x_i -- y_j,   x_i -- proj(x_i),   proj(y_j) -- y_j,
//   proj(y_j) -- proj(x_i) for all i, j unconditionally.
struct MatchingResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (left, right)
  std::size_t cardinality = 0;
};

// Maximum matching in the threshold graph for a varying threshold.
//
// Phases of shortest augmenting paths in the Hopcroft-Karp scheme; neighbors
// of a point of X among the points of Y come from fixed-radius queries
// against a kd-tree with deletion, and the edges to diagonal projections are
// resolved from per-vertex checks and a pool of unvisited projections, so no
// edge list is ever built.
//
// The matching persists between calls: raising the threshold only adds
// edges, so the previous matching is augmented; lowering it first drops the
// matched pairs that are no longer edges.
class ThresholdMatcher {
 public:
  ThresholdMatcher(const PersistenceDiagram& x, const PersistenceDiagram& y, GroundMetric metric);

  // Maximum matching cardinality M(t). Throws std::invalid_argument if t < 0.
  std::size_t max_matching_size(double threshold);

  std::size_t vertex_count() const { return nx_ + ny_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }

  // The current matching (valid for the last threshold passed in).
  MatchingResult matching() const;

  // True iff (left, right) is an edge of the threshold graph at `threshold`.
  bool is_edge(std::size_t left, std::size_t right, double threshold) const;

 private:
  static constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
  static constexpr int kUnreached = -1;

  bool run_phase();
  bool layer_search();
  bool augment_from(std::size_t root);
  std::size_t next_layer_neighbor(std::size_t left);
  void drop_invalid_pairs();

  GroundMetric metric_;
  std::vector<PlanePoint> xs_, ys_;
  std::vector<double> x_diag_, y_diag_;
  std::size_t nx_ = 0, ny_ = 0;
  double threshold_ = 0.0;
  std::size_t matched_ = 0;

  std::vector<std::size_t> mate_left_, mate_right_;

  // Per-phase state.
  std::vector<int> left_layer_, right_layer_;
  int augmenting_layer_ = 0;
  KdTree y_index_;                              // points of Y for the layer search
  std::vector<KdTree> layer_y_index_;           // points of Y by layer, for path search
  std::vector<std::vector<std::size_t>> layer_x_proj_;  // projections of X by layer
  std::vector<std::uint8_t> right_used_;
  std::vector<std::size_t> query_buffer_;
};

// M(t) for a single threshold.
std::size_t max_matching_size(const PersistenceDiagram& x, const PersistenceDiagram& y, double threshold,
                              GroundMetric metric = {});

// Sorted, deduplicated cross distances d(x, y) and diagonal distances of all
// off-diagonal points, with 0 prepended: the jump locations of t -> M(t).
std::vector<double> candidate_distances(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                        GroundMetric metric = {});

}  // namespace pdmetric
