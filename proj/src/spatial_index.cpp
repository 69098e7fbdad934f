#include "pvd/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pvd {

namespace {

// Sort-tile-recursive grouping of items by box center into runs of at most `capacity`.
std::vector<std::vector<std::size_t>> str_groups(std::vector<std::size_t> items,
                                                 const std::function<Point2D(std::size_t)>& center,
                                                 std::size_t capacity) {
  const std::size_t n = items.size();
  const auto pages = (n + capacity - 1) / capacity;
  const auto slices = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(pages))));
  const std::size_t slice_len = slices * capacity;

  std::sort(items.begin(), items.end(), [&](std::size_t a, std::size_t b) {
    const Point2D ca = center(a), cb = center(b);
    return ca.x != cb.x ? ca.x < cb.x : (ca.y != cb.y ? ca.y < cb.y : a < b);
  });
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t s = 0; s < n; s += slice_len) {
    const auto end = items.begin() + static_cast<std::ptrdiff_t>(std::min(n, s + slice_len));
    const auto begin = items.begin() + static_cast<std::ptrdiff_t>(s);
    std::sort(begin, end, [&](std::size_t a, std::size_t b) {
      const Point2D ca = center(a), cb = center(b);
      return ca.y != cb.y ? ca.y < cb.y : (ca.x != cb.x ? ca.x < cb.x : a < b);
    });
    for (auto it = begin; it < end; it += static_cast<std::ptrdiff_t>(std::min<std::size_t>(capacity, end - it))) {
      groups.emplace_back(it, it + static_cast<std::ptrdiff_t>(std::min<std::size_t>(capacity, end - it)));
    }
  }
  return groups;
}

}  // namespace

MbrIndex::MbrIndex(std::vector<IndexEntry> entries, std::size_t capacity)
    : entries_(std::move(entries)), capacity_(capacity) {
  if (capacity < 2) throw std::invalid_argument("index capacity must be at least 2");
  if (entries_.empty()) return;

  std::vector<std::size_t> level_items(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) level_items[i] = i;
  int level = 0;
  std::function<Point2D(std::size_t)> center = [&](std::size_t i) { return entries_[i].box.center(); };
  auto box_of = [&](std::size_t i) { return entries_[i].box; };
  std::function<Mbr(std::size_t)> item_box = box_of;

  while (true) {
    std::vector<std::size_t> next;
    for (auto& group : str_groups(level_items, center, capacity_)) {
      Node node;
      node.level = level;
      node.box = item_box(group.front());
      for (std::size_t i : group) node.box = node.box.merged(item_box(i));
      node.items = std::move(group);
      next.push_back(nodes_.size());
      nodes_.push_back(std::move(node));
    }
    if (next.size() == 1) {
      root_ = next.front();
      break;
    }
    level_items = std::move(next);
    ++level;
    center = [this](std::size_t i) { return nodes_[i].box.center(); };
    item_box = [this](std::size_t i) { return nodes_[i].box; };
  }
}

std::vector<ObjectId> MbrIndex::window_query(const Mbr& window, IoCounter& counter) const {
  std::vector<ObjectId> out;
  if (nodes_.empty()) return out;
  std::vector<std::size_t> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    ++counter.node_accesses;
    for (std::size_t i : node.items) {
      if (node.level == 0) {
        if (entries_[i].box.intersects(window)) out.push_back(entries_[i].id);
      } else if (nodes_[i].box.intersects(window)) {
        stack.push_back(i);
      }
    }
  }
  return out;
}

std::vector<ObjectId> MbrIndex::point_query(Point2D q, IoCounter& counter) const {
  return window_query(Mbr::of_point(q), counter);
}

MbrIndex::MindistScan MbrIndex::mindist_scan(Point2D q, IoCounter& counter) const {
  return MindistScan(*this, q, counter);
}

MbrIndex::MindistScan::MindistScan(const MbrIndex& index, Point2D q, IoCounter& counter)
    : index_(&index), q_(q), counter_(&counter) {
  if (!index.nodes_.empty()) heap_.push({index.nodes_[index.root_].box.mindist(q), true, index.root_});
}

double MbrIndex::MindistScan::next_key() const {
  return heap_.empty() ? std::numeric_limits<double>::infinity() : heap_.top().key;
}

std::optional<MbrIndex::ScanItem> MbrIndex::MindistScan::next() {
  while (!heap_.empty()) {
    const Pending top = heap_.top();
    heap_.pop();
    if (!top.is_node) return ScanItem{index_->entries_[top.index].id, top.key};
    ++counter_->node_accesses;
    const Node& node = index_->nodes_[top.index];
    for (std::size_t i : node.items) {
      if (node.level == 0) {
        heap_.push({index_->entries_[i].box.mindist(q_), false, i});
      } else {
        heap_.push({index_->nodes_[i].box.mindist(q_), true, i});
      }
    }
  }
  return std::nullopt;
}

}  // namespace pvd
