#pragma once

#include "pvd/kernel.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

namespace pvd {

struct IoCounter {
  std::uint64_t node_accesses = 0;
};

struct IndexEntry {
  Mbr box;
  ObjectId id = 0;
};

/// Static R-tree, bulk-loaded by sort-tile-recursive packing.
class MbrIndex {
 public:
  static constexpr std::size_t kDefaultCapacity = 50;

  struct Node {
    Mbr box;
    int level = 0;                    // 0 for leaves
    std::vector<std::size_t> items;   // entry indices in a leaf, node indices otherwise
  };

  struct ScanItem {
    ObjectId id = 0;
    double key = 0.0;  // MBR mindist from the scan anchor
  };

  /// Best-first traversal in non-decreasing MBR mindist. One node access per node pop.
  class MindistScan {
   public:
    std::optional<ScanItem> next();
    /// Lower bound on the key of every item not yet returned; +inf once exhausted.
    double next_key() const;

   private:
    friend class MbrIndex;
    struct Pending {
      double key;
      bool is_node;
      std::size_t index;
      bool operator>(const Pending& o) const {
        if (key != o.key) return key > o.key;
        return is_node && !o.is_node;  // entries before nodes at equal keys
      }
    };
    MindistScan(const MbrIndex& index, Point2D q, IoCounter& counter);

    const MbrIndex* index_;
    Point2D q_;
    IoCounter* counter_;
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> heap_;
  };

  MbrIndex() = default;
  /// Throws std::invalid_argument when capacity < 2.
  explicit MbrIndex(std::vector<IndexEntry> entries, std::size_t capacity = kDefaultCapacity);

  std::vector<ObjectId> window_query(const Mbr& window, IoCounter& counter) const;
  std::vector<ObjectId> point_query(Point2D q, IoCounter& counter) const;
  MindistScan mindist_scan(Point2D q, IoCounter& counter) const;

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// Number of levels; 0 for an empty index.
  int height() const { return nodes_.empty() ? 0 : nodes_[root_].level + 1; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<IndexEntry>& entries() const { return entries_; }
  std::size_t root() const { return root_; }

 private:
  std::vector<IndexEntry> entries_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
  std::size_t capacity_ = kDefaultCapacity;
};

/// Objects from an index in non-decreasing exact mindist. An object is released once
/// its exact mindist is no larger than the scan's lower bound on everything unseen.
template <class Object, class Query>
class IndexMindistStream final : public MindistStream<Object> {
 public:
  using Lookup = std::function<const Object&(ObjectId)>;

  IndexMindistStream(const MbrIndex& index, Point2D anchor, Query query, Lookup lookup,
                     IoCounter& counter)
      : scan_(index.mindist_scan(anchor, counter)), query_(query), lookup_(std::move(lookup)) {}

  const Object* peek() override {
    while (true) {
      const double bound = scan_.next_key();
      if (!ready_.empty() && ready_.top().key <= bound) return ready_.top().object;
      auto item = scan_.next();
      if (!item) return ready_.empty() ? nullptr : ready_.top().object;
      const Object& o = lookup_(item->id);
      ready_.push({mindist(query_, o), o.id, &o});
    }
  }

  void pop() override {
    if (peek()) ready_.pop();
  }

 private:
  struct Ready {
    double key;
    ObjectId id;
    const Object* object;
    bool operator>(const Ready& o) const { return key != o.key ? key > o.key : id > o.id; }
  };
  MbrIndex::MindistScan scan_;
  Query query_;
  Lookup lookup_;
  std::priority_queue<Ready, std::vector<Ready>, std::greater<>> ready_;
};

}  // namespace pvd
