#include "doctest.h"

#include "pvd/spatial_index.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace pvd;

namespace {

std::vector<IndexEntry> random_entries(int n, double span, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, span), side(1, 40);
  std::vector<IndexEntry> out;
  for (int i = 0; i < n; ++i) {
    const Point2D c{u(rng), u(rng)};
    const double w = side(rng), h = side(rng);
    out.push_back({{{c.x - w / 2, c.y - h / 2}, {c.x + w / 2, c.y + h / 2}}, i});
  }
  return out;
}

std::vector<ObjectId> sorted(std::vector<ObjectId> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<ObjectId> scan_filter(const std::vector<IndexEntry>& entries, const Mbr& window) {
  std::vector<ObjectId> out;
  for (const auto& e : entries) {
    if (e.box.intersects(window)) out.push_back(e.id);
  }
  return sorted(out);
}

// Walks the whole tree checking capacity, containment, balance and payload coverage.
void check_structure(const MbrIndex& index) {
  std::map<ObjectId, int> seen;
  std::vector<std::pair<std::size_t, int>> stack{{index.root(), 0}};
  std::set<int> leaf_depths;
  while (!stack.empty()) {
    auto [n, depth] = stack.back();
    stack.pop_back();
    const auto& node = index.nodes()[n];
    REQUIRE(node.items.size() <= index.capacity());
    REQUIRE_FALSE(node.items.empty());
    for (std::size_t i : node.items) {
      if (node.level == 0) {
        CHECK(node.box.contains(index.entries()[i].box));
        ++seen[index.entries()[i].id];
      } else {
        CHECK(node.box.contains(index.nodes()[i].box));
        CHECK(index.nodes()[i].level == node.level - 1);
        stack.push_back({i, depth + 1});
      }
    }
    if (node.level == 0) leaf_depths.insert(depth);
  }
  CHECK(seen.size() == index.size());
  for (auto& [id, count] : seen) CHECK(count == 1);
  CHECK(leaf_depths.size() == 1);
  CHECK(*leaf_depths.begin() == index.height() - 1);
}

}  // namespace

TEST_CASE("tree shape") {
  CHECK_THROWS_AS(MbrIndex(std::vector<IndexEntry>{}, 1), std::invalid_argument);

  MbrIndex empty(std::vector<IndexEntry>{});
  IoCounter c;
  CHECK(empty.empty());
  CHECK(empty.height() == 0);
  CHECK(empty.window_query({{0, 0}, {1, 1}}, c).empty());
  CHECK(empty.mindist_scan({0, 0}, c).next() == std::nullopt);

  MbrIndex one({{{{0, 0}, {1, 1}}, 7}});
  CHECK(one.height() == 1);
  CHECK(one.node_count() == 1);

  MbrIndex fifty_one(random_entries(51, 100, 1), 50);
  CHECK(fifty_one.height() == 2);
  check_structure(fifty_one);

  MbrIndex big(random_entries(10'000, 10'000, 2));
  check_structure(big);
  CHECK(big.height() == 3);
}

TEST_CASE("window and point queries match a linear scan") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int n = 10 + static_cast<int>(seed * 37 % 1500);
    const auto entries = random_entries(n, 1000, seed);
    const MbrIndex index(entries, 2 + seed % 49);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-50, 1050), side(0, 300);
    for (int t = 0; t < 10; ++t) {
      const Point2D c{u(rng), u(rng)};
      const double w = side(rng);
      const Mbr window = Mbr::centered(c, w);
      IoCounter counter;
      CHECK(sorted(index.window_query(window, counter)) == scan_filter(entries, window));
      CHECK(counter.node_accesses >= 1);
      CHECK(counter.node_accesses <= index.node_count());
      IoCounter pc;
      CHECK(sorted(index.point_query(c, pc)) == scan_filter(entries, Mbr::of_point(c)));
    }
  }
}

TEST_CASE("window extremes") {
  const auto entries = random_entries(3000, 1000, 5);
  const MbrIndex index(entries);
  IoCounter all;
  CHECK(index.window_query({{-1e9, -1e9}, {1e9, 1e9}}, all).size() == entries.size());
  CHECK(all.node_accesses == index.node_count());
  IoCounter none;
  CHECK(index.window_query({{5000, 5000}, {6000, 6000}}, none).empty());
  CHECK(none.node_accesses >= 1);
}

TEST_CASE("point queries touch fewer nodes than a full scan") {
  const auto entries = random_entries(5000, 10'000, 9);
  const MbrIndex index(entries);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 10'000);
  std::uint64_t total = 0;
  for (int t = 0; t < 200; ++t) {
    IoCounter c;
    index.point_query({u(rng), u(rng)}, c);
    CHECK(c.node_accesses < index.node_count());
    total += c.node_accesses;
  }
  CHECK(total / 200.0 < index.node_count() / 4.0);
}

TEST_CASE("mindist scan order") {
  SUBCASE("two separated entries") {
    const MbrIndex index({{{{100, 100}, {101, 101}}, 1}, {{{5, 5}, {6, 6}}, 2}});
    IoCounter c;
    auto scan = index.mindist_scan({0, 0}, c);
    CHECK(scan.next()->id == 2);
    CHECK(scan.next()->id == 1);
    CHECK_FALSE(scan.next());
  }
  SUBCASE("query inside an entry") {
    const auto entries = random_entries(500, 1000, 4);
    const MbrIndex index(entries);
    IoCounter c;
    const Point2D q = entries[123].box.center();
    auto first = index.mindist_scan(q, c).next();
    REQUIRE(first);
    CHECK(first->key == 0.0);
    CHECK(entries[static_cast<std::size_t>(first->id)].box.contains(q));
  }
  SUBCASE("random instances follow sorted mindist") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto entries = random_entries(50 + static_cast<int>(seed * 13 % 700), 1000, seed + 77);
      const MbrIndex index(entries, 4 + seed % 40);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0, 1000);
      const Point2D q{u(rng), u(rng)};
      std::vector<double> expected;
      for (const auto& e : entries) expected.push_back(e.box.mindist(q));
      std::sort(expected.begin(), expected.end());

      IoCounter c;
      auto scan = index.mindist_scan(q, c);
      std::vector<double> got;
      std::set<ObjectId> ids;
      std::uint64_t last = 0;
      while (auto item = scan.next()) {
        CHECK(item->key == entries[static_cast<std::size_t>(item->id)].box.mindist(q));
        got.push_back(item->key);
        ids.insert(item->id);
        CHECK(c.node_accesses >= last);
        last = c.node_accesses;
      }
      CHECK(got == expected);
      CHECK(ids.size() == entries.size());
      CHECK(c.node_accesses == index.node_count());
    }
  }
}

TEST_CASE("exact-mindist stream over disc objects") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 2000), ur(2.5, 15);
  std::vector<UncertainDisc> discs;
  std::vector<IndexEntry> entries;
  for (int i = 0; i < 800; ++i) {
    discs.push_back({i, {u(rng), u(rng)}, ur(rng)});
    entries.push_back({Mbr::of(discs.back()), i});
  }
  const MbrIndex index(entries, 16);
  for (int t = 0; t < 20; ++t) {
    const Point2D q{u(rng), u(rng)};
    IoCounter c;
    IndexMindistStream<UncertainDisc, Point2D> stream(
        index, q, q, [&](ObjectId id) -> const UncertainDisc& { return discs[static_cast<std::size_t>(id)]; }, c);
    std::vector<double> expected;
    for (const auto& d : discs) expected.push_back(mindist(q, d));
    std::sort(expected.begin(), expected.end());
    std::vector<double> got;
    while (const auto* o = stream.peek()) {
      got.push_back(mindist(q, *o));
      stream.pop();
    }
    CHECK(got == expected);
  }
}

TEST_CASE("early stop touches few nodes") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 10'000), ur(2.5, 15);
  std::vector<UncertainDisc> discs;
  std::vector<IndexEntry> entries;
  for (int i = 0; i < 5000; ++i) {
    discs.push_back({i, {u(rng), u(rng)}, ur(rng)});
    entries.push_back({Mbr::of(discs.back()), i});
  }
  const MbrIndex index(entries);
  IoCounter c;
  IndexMindistStream<UncertainDisc, Point2D> stream(
      index, {5000, 5000}, Point2D{5000, 5000},
      [&](ObjectId id) -> const UncertainDisc& { return discs[static_cast<std::size_t>(id)]; }, c);
  auto res = topk_pnn(stream, {5000, 5000}, 5, KernelConfig{});
  CHECK(res.ranked.size() == 5);
  CHECK(c.node_accesses < index.node_count() / 5);
}
