#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pdmetric/diagram.hpp"

namespace pdmetric {

// Static 2-d tree over a fixed point set with point deletion.
//
// Every node keeps its bounding box and the number of live points below it,
// so a fixed-radius query skips both far-away and fully deleted subtrees.
// Queries compare with ground_distance(q, p) <= radius, the same predicate
// the threshold graph uses for its edges.
class KdTree {
 public:
  struct Entry {
    PlanePoint point;
    std::size_t id;  // caller-owned identifier, reported back by queries
  };

  KdTree() = default;
  KdTree(std::vector<Entry> entries, GroundMetric metric);

  std::size_t size() const { return entries_.size(); }
  std::size_t live() const { return nodes_.empty() ? 0 : nodes_.front().live; }

  // Some live entry within `radius` of `query`, or nullopt. Does not delete.
  std::optional<std::size_t> find_one(const PlanePoint& query, double radius) const;

  // Appends the ids of all live entries within `radius` of `query` to `out`
  // and deletes them.
  void extract_all(const PlanePoint& query, double radius, std::vector<std::size_t>& out);

  // Deletes by caller id. Returns false if the id is unknown or already deleted.
  bool erase(std::size_t id);

  // Makes every entry live again.
  void restore_all();

 private:
  struct Node {
    double min_x, max_x, min_y, max_y;
    std::uint32_t begin, end;  // range in entries_
    std::int32_t left = -1, right = -1, parent = -1;
    std::uint32_t live = 0;
  };

  static constexpr std::size_t kLeafSize = 8;

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::int32_t parent);
  double box_distance(const Node& node, const PlanePoint& query) const;
  void erase_at(std::size_t position);
  std::optional<std::size_t> find_one(std::int32_t node, const PlanePoint& query, double radius) const;
  void extract_all(std::int32_t node, const PlanePoint& query, double radius, std::vector<std::size_t>& out);

  GroundMetric metric_;
  std::vector<Entry> entries_;
  std::vector<Node> nodes_;
  std::vector<std::uint8_t> alive_;             // by position
  std::vector<std::int32_t> leaf_of_position_;  // leaf node holding each position
  std::vector<std::size_t> position_of_id_;     // dense map; npos for unknown ids
};

}  // namespace pdmetric
