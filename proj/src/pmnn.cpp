#include "pvd/pmnn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pvd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double cdf(Point2D q, double d, const UncertainDisc& o) {
  return std::clamp(lens_area(q, d, o) / o.area(), 0.0, 1.0);
}

}  // namespace

std::string_view to_string(Resolution r) {
  switch (r) {
    case Resolution::Server: return "server";
    case Resolution::Cell: return "cell";
    case Resolution::PbrResolved: return "pbr-resolved";
    case Resolution::SafeContainment: return "safe-containment";
    case Resolution::SafeLowerBound: return "safe-lowerbound";
    case Resolution::Refreshed: return "refreshed";
  }
  return "unknown";
}

ObjectServer::ObjectServer(std::vector<UncertainDisc> objects, std::size_t capacity)
    : objects_(std::move(objects)) {
  std::vector<IndexEntry> entries;
  entries.reserve(objects_.size());
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    validate(objects_[i]);
    if (!position_.emplace(objects_[i].id, i).second) throw std::invalid_argument("duplicate object id");
    entries.push_back({Mbr::of(objects_[i]), objects_[i].id});
  }
  index_ = MbrIndex(std::move(entries), capacity);
}

IndexMindistStream<UncertainDisc, Point2D> ObjectServer::stream(Point2D q, IoCounter& io) const {
  return {index_, q, q, [this](ObjectId id) -> const UncertainDisc& { return object(id); }, io};
}

ProbResult ObjectServer::top1(Point2D q, const KernelConfig& cfg, IoCounter& io) const {
  auto s = stream(q, io);
  const auto res = topk_pnn(s, q, 1, cfg);
  // The retrieved set holds every object with non-zero probability, so this is exact.
  return top1_pnn(res.retrieved, q, cfg);
}

RunResult naive_pmnn(std::span<const Point2D> traj, const ObjectServer& server, const KernelConfig& cfg) {
  RunResult run;
  const Stopwatch clock;
  IoCounter io;
  for (const Point2D& q : traj) {
    ++run.metrics.communications;
    run.steps.push_back({q, server.top1(q, cfg, io).id, Resolution::Server});
  }
  run.metrics.io = io.node_accesses;
  run.metrics.time_s = clock.seconds();
  return run;
}

PvdServer::PvdServer(std::vector<UncertainDisc> objects, const Mbr& space, const KernelConfig& cfg)
    : objects_(objects), pvd_(prob_voronoi_2d(objects, space, cfg)) {
  std::vector<IndexEntry> entries;
  for (std::size_t i = 0; i < pvd_.sites.size(); ++i) entries.push_back({pvd_.mbrs[i], static_cast<ObjectId>(i)});
  cell_index_ = MbrIndex(std::move(entries));
}

RunResult ppvd_pmnn(std::span<const Point2D> traj, const PvdServer& server, double buffer_window,
                    const KernelConfig& cfg) {
  if (buffer_window < 0.0) throw std::invalid_argument("buffer window must be non-negative");
  const Pvd2D& pvd = server.pvd();
  RunResult run;
  const Stopwatch clock;
  IoCounter io;
  std::vector<std::size_t> buffer;

  // The buffered cell holding q, nearest center first on shared boundaries.
  auto find_cell = [&](Point2D q) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t s : buffer) {
      if (!polygon_contains(pvd.cells[s], q)) continue;
      if (!best || dist(q, pvd.sites[s].center) < dist(q, pvd.sites[*best].center)) best = s;
    }
    return best;
  };

  for (const Point2D& q : traj) {
    if (!pvd.space.contains(q)) throw std::out_of_range("trajectory leaves the data space");
    bool contacted = false;
    auto cell = find_cell(q);
    if (!cell) {
      contacted = true;
      const Mbr window = Mbr::centered(q, buffer_window);
      buffer.clear();
      for (ObjectId s : server.cell_index().window_query(window, io)) buffer.push_back(static_cast<std::size_t>(s));
      cell = find_cell(q);
      if (!cell) throw std::logic_error("no Voronoi cell contains the query point");
    }
    const Location2D loc = locate_in_cell(pvd, *cell, q);
    if (loc.kind == Location2D::Kind::Cell) {
      run.steps.push_back({q, loc.owners.front(), Resolution::Cell});
    } else {
      contacted = true;
      // Owners plus anything closer than the owners' largest maxdist covers every
      // object with non-zero probability at q.
      double bound = 0.0;
      for (ObjectId id : loc.owners) bound = std::max(bound, maxdist(q, server.objects().object(id)));
      auto s = server.objects().stream(q, io);
      std::vector<UncertainDisc> candidates;
      while (const UncertainDisc* o = s.peek()) {
        if (mindist(q, *o) >= bound) break;
        candidates.push_back(*o);
        s.pop();
      }
      run.steps.push_back({q, top1_pnn(candidates, q, cfg).id, Resolution::PbrResolved});
    }
    run.metrics.communications += contacted ? 1 : 0;
  }
  run.metrics.io = io.node_accesses;
  run.metrics.time_s = clock.seconds();
  return run;
}

KnownRegion build_known_region(const ObjectServer& server, Point2D q_s, int k, const KernelConfig& cfg,
                               IoCounter& io) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  KnownRegion region;
  region.anchor = q_s;
  auto s = server.stream(q_s, io);
  auto res = topk_pnn(s, q_s, k, cfg);
  region.top = res.ranked;
  region.flagged = res.truncated;
  if (region.flagged) {
    region.radius = kInf;
    region.objects = server.objects();
    return region;
  }
  for (const auto& p : region.top) region.radius = std::max(region.radius, maxdist(q_s, server.object(p.id)));
  // Non-top-k objects inside the circle are retrieved too; the safe-region tests assume
  // that every unseen object lies entirely outside it.
  region.objects = std::move(res.retrieved);
  while (const UncertainDisc* o = s.peek()) {
    if (mindist(q_s, *o) >= region.radius) break;
    region.objects.push_back(*o);
    s.pop();
  }
  std::erase_if(region.objects, [&](const UncertainDisc& o) { return mindist(q_s, o) >= region.radius; });
  return region;
}

bool safe_containment(Point2D q, const UncertainDisc& o, const KnownRegion& region) {
  return dist(q, o.center) + o.radius <= region.radius - dist(q, region.anchor);
}

bool safe_lower_bound(Point2D q, const UncertainDisc& o, const KnownRegion& region, const KernelConfig& cfg) {
  const double rho = region.radius - dist(q, region.anchor);
  if (!(rho > 0.0)) return false;

  // Known objects that can be the nearest neighbor at q.
  double cut = kInf;
  for (const auto& x : region.objects) cut = std::min(cut, maxdist(q, x));
  std::vector<const UncertainDisc*> cand;
  std::size_t me = 0;
  bool found = false;
  for (const auto& x : region.objects) {
    if (mindist(q, x) >= cut) continue;
    if (x.id == o.id) {
      me = cand.size();
      found = true;
    }
    cand.push_back(&x);
  }
  if (!found) return false;

  // Breakpoints: distribution kinks, rho, then pieces no wider than cfg.step.
  std::vector<double> cuts{rho, cut};
  double lo = cut;
  for (const auto* x : cand) {
    const double c = dist(q, x->center);
    lo = std::min(lo, mindist(q, *x));
    for (double v : {c - x->radius, x->radius - c, c + x->radius}) cuts.push_back(v);
  }
  std::erase_if(cuts, [&](double v) { return v < lo || v > cut; });
  cuts.push_back(lo);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> grid{cuts.front()};
  for (std::size_t m = 1; m < cuts.size(); ++m) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((cuts[m] - cuts[m - 1]) / cfg.step - 1e-9)));
    for (int p = 1; p <= pieces; ++p) {
      grid.push_back(p == pieces ? cuts[m] : cuts[m - 1] + (cuts[m] - cuts[m - 1]) * p / pieces);
    }
  }

  // Cumulative probability of each candidate when a point object sits at distance d: the
  // mass of the candidate within d times everyone else's survival.
  const std::size_t n = cand.size();
  std::vector<double> cum(n, 0.0), prev_cdf(n), cur_cdf(n), mid_cdf(n);
  for (std::size_t k = 0; k < n; ++k) prev_cdf[k] = cdf(q, grid.front(), *cand[k]);
  const double margin = cfg.prob_epsilon;
  auto ahead_of_known = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != me && cum[me] < cum[k] + margin) return false;
    }
    return true;
  };
  // o_v closer than every known object would certainly win.
  if (rho <= grid.front()) return false;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double a = grid[g - 1], b = grid[g], mid = 0.5 * (a + b);
    for (std::size_t k = 0; k < n; ++k) {
      cur_cdf[k] = cdf(q, b, *cand[k]);
      mid_cdf[k] = cdf(q, mid, *cand[k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
      double survive = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) survive *= 1.0 - mid_cdf[j];
      }
      cum[k] += (cur_cdf[k] - prev_cdf[k]) * survive;
    }
    prev_cdf = cur_cdf;
    if (b < rho) continue;
    if (b == rho) {
      // lp(o_i) >= p(o_v); farther o_v only lowers p(o_v) and raises lp.
      double survive_all = 1.0;
      for (std::size_t k = 0; k < n; ++k) survive_all *= 1.0 - cur_cdf[k];
      if (cum[me] < survive_all + margin) return false;
    }
    if (!ahead_of_known()) return false;
  }
  // Beyond the smallest maxdist nothing changes: the unplanted ranking.
  return ahead_of_known();
}

RunResult ipvd_pmnn(std::span<const Point2D> traj, const ObjectServer& server, int k, const KernelConfig& cfg) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (server.objects().empty()) throw std::invalid_argument("no objects");
  RunResult run;
  const Stopwatch clock;
  IoCounter io;
  KnownRegion region;
  Pvd2D local;
  bool have_region = false;

  auto local_winner = [&](Point2D q) -> ObjectId {
    if (local.space.contains(q)) {
      const Location2D loc = locate_2d(local, q);
      if (loc.kind == Location2D::Kind::Cell) return loc.owners.front();
    }
    return top1_pnn(region.objects, q, cfg).id;
  };

  for (const Point2D& q : traj) {
    if (have_region && dist(q, region.anchor) < region.radius) {
      const ObjectId w = local_winner(q);
      const UncertainDisc& o = server.object(w);
      if (safe_containment(q, o, region)) {
        run.steps.push_back({q, w, Resolution::SafeContainment});
        continue;
      }
      if (safe_lower_bound(q, o, region, cfg)) {
        run.steps.push_back({q, w, Resolution::SafeLowerBound});
        continue;
      }
    }
    ++run.metrics.communications;
    region = build_known_region(server, q, k, cfg, io);
    have_region = true;
    Mbr space = std::isfinite(region.radius) ? Mbr::centered(q, 2.0 * region.radius) : Mbr{};
    if (!std::isfinite(region.radius)) {
      space = Mbr::of(region.objects.front());
      for (const auto& o : region.objects) space = space.merged(Mbr::of(o));
      for (const auto& p : traj) space = space.merged(Mbr::of_point(p));
    }
    local = prob_voronoi_2d(region.objects, space, cfg);
    // At the anchor every object with non-zero probability is known.
    run.steps.push_back({q, top1_pnn(region.objects, q, cfg).id, Resolution::Refreshed});
  }
  run.metrics.io = io.node_accesses;
  run.metrics.time_s = clock.seconds();
  return run;
}

}  // namespace pvd
