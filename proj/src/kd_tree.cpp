#include "pdmetric/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdmetric {

namespace {
constexpr std::size_t kNoPosition = std::numeric_limits<std::size_t>::max();
}

KdTree::KdTree(std::vector<Entry> entries, GroundMetric metric)
    : metric_(metric), entries_(std::move(entries)) {
  alive_.assign(entries_.size(), 1);
  leaf_of_position_.assign(entries_.size(), -1);
  if (entries_.empty()) return;
  nodes_.reserve(2 * entries_.size() / kLeafSize + 2);
  build(0, static_cast<std::uint32_t>(entries_.size()), -1);

  std::size_t max_id = 0;
  for (const auto& e : entries_) max_id = std::max(max_id, e.id);
  position_of_id_.assign(max_id + 1, kNoPosition);
  for (std::size_t pos = 0; pos < entries_.size(); ++pos) position_of_id_[entries_[pos].id] = pos;
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::int32_t parent) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{});
  Node node;
  node.begin = begin;
  node.end = end;
  node.parent = parent;
  node.live = end - begin;
  node.min_x = node.min_y = std::numeric_limits<double>::infinity();
  node.max_x = node.max_y = -std::numeric_limits<double>::infinity();
  for (auto i = begin; i < end; ++i) {
    const auto& p = entries_[i].point;
    node.min_x = std::min(node.min_x, p.birth);
    node.max_x = std::max(node.max_x, p.birth);
    node.min_y = std::min(node.min_y, p.death);
    node.max_y = std::max(node.max_y, p.death);
  }

  if (end - begin <= kLeafSize) {
    for (auto i = begin; i < end; ++i) leaf_of_position_[i] = index;
    nodes_[index] = node;
    return index;
  }

  const bool split_x = (node.max_x - node.min_x) >= (node.max_y - node.min_y);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(entries_.begin() + begin, entries_.begin() + mid, entries_.begin() + end,
                   [split_x](const Entry& a, const Entry& b) {
                     return split_x ? a.point.birth < b.point.birth : a.point.death < b.point.death;
                   });
  nodes_[index] = node;
  const auto left = build(begin, mid, index);
  const auto right = build(mid, end, index);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

double KdTree::box_distance(const Node& node, const PlanePoint& query) const {
  const double dx = std::max({0.0, node.min_x - query.birth, query.birth - node.max_x});
  const double dy = std::max({0.0, node.min_y - query.death, query.death - node.max_y});
  return ground_distance(PlanePoint{0.0, 0.0}, PlanePoint{dx, dy}, metric_);
}

std::optional<std::size_t> KdTree::find_one(const PlanePoint& query, double radius) const {
  if (nodes_.empty()) return std::nullopt;
  return find_one(0, query, radius);
}

std::optional<std::size_t> KdTree::find_one(std::int32_t index, const PlanePoint& query, double radius) const {
  const Node& node = nodes_[index];
  // Pruning tolerates a few ulps so rounding in the box bound never hides a
  // point that passes the exact test below.
  if (node.live == 0 || box_distance(node, query) > radius * (1 + 1e-12)) return std::nullopt;
  if (node.left < 0) {
    for (auto i = node.begin; i < node.end; ++i) {
      if (alive_[i] && ground_distance(query, entries_[i].point, metric_) <= radius) return entries_[i].id;
    }
    return std::nullopt;
  }
  if (auto hit = find_one(node.left, query, radius)) return hit;
  return find_one(node.right, query, radius);
}

void KdTree::extract_all(const PlanePoint& query, double radius, std::vector<std::size_t>& out) {
  if (!nodes_.empty()) extract_all(0, query, radius, out);
}

void KdTree::extract_all(std::int32_t index, const PlanePoint& query, double radius,
                         std::vector<std::size_t>& out) {
  const Node& node = nodes_[index];
  if (node.live == 0 || box_distance(node, query) > radius * (1 + 1e-12)) return;
  if (node.left < 0) {
    for (auto i = node.begin; i < node.end; ++i) {
      if (alive_[i] && ground_distance(query, entries_[i].point, metric_) <= radius) {
        out.push_back(entries_[i].id);
        erase_at(i);
      }
    }
    return;
  }
  extract_all(node.left, query, radius, out);
  extract_all(node.right, query, radius, out);
}

bool KdTree::erase(std::size_t id) {
  if (id >= position_of_id_.size()) return false;
  const auto pos = position_of_id_[id];
  if (pos == kNoPosition || !alive_[pos]) return false;
  erase_at(pos);
  return true;
}

void KdTree::erase_at(std::size_t position) {
  alive_[position] = 0;
  for (auto n = leaf_of_position_[position]; n >= 0; n = nodes_[n].parent) --nodes_[n].live;
}

void KdTree::restore_all() {
  std::fill(alive_.begin(), alive_.end(), 1);
  for (auto& node : nodes_) node.live = node.end - node.begin;
}

}  // namespace pdmetric
