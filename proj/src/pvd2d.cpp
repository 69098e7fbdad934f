#include "pvd/pvd2d.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace pvd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSearchWidth = 1e-5;
constexpr double kExactZero = 1e-12;
constexpr double kMinEdge = 1e-9;
constexpr double kClipInflation = 0.05;
constexpr double kBoundaryTolerance = 1e-9;

Point2D unit(Point2D v) {
  const double n = norm(v);
  return {v.x / n, v.y / n};
}

// Convex polygon with a source label per edge (edge m runs v[m] -> v[m+1]).
struct LabeledPolygon {
  std::vector<Point2D> v;
  std::vector<std::size_t> label;  // site index, or kBox
};
constexpr std::size_t kBox = std::numeric_limits<std::size_t>::max();

LabeledPolygon box_polygon(const Mbr& box) {
  return {{box.lo, {box.hi.x, box.lo.y}, box.hi, {box.lo.x, box.hi.y}}, {kBox, kBox, kBox, kBox}};
}

LabeledPolygon clip_labeled(const LabeledPolygon& poly, Point2D normal, double offset, std::size_t label) {
  LabeledPolygon out;
  const std::size_t n = poly.v.size();
  for (std::size_t m = 0; m < n; ++m) {
    const Point2D a = poly.v[m], b = poly.v[(m + 1) % n];
    const double da = dot(a, normal) - offset, db = dot(b, normal) - offset;
    if (da <= 0) {
      out.v.push_back(a);
      if (db <= 0) {
        out.label.push_back(poly.label[m]);
      } else {
        out.label.push_back(poly.label[m]);
        out.v.push_back(a + (da / (da - db)) * (b - a));
        out.label.push_back(label);
      }
    } else if (db <= 0) {
      out.v.push_back(a + (da / (da - db)) * (b - a));
      out.label.push_back(poly.label[m]);
    }
  }
  return out;
}

// Cell of site i clipped against the other sites in increasing center distance.
LabeledPolygon voronoi_cell(std::span<const UncertainDisc> sites, std::size_t i, const Mbr& box,
                            const MbrIndex& centers) {
  LabeledPolygon cell = box_polygon(box);
  const Point2D ci = sites[i].center;
  IoCounter io;
  auto scan = centers.mindist_scan(ci, io);
  while (auto item = scan.next()) {
    const auto k = static_cast<std::size_t>(item->id);
    if (k == i) continue;
    double reach = 0.0;
    for (const Point2D& p : cell.v) reach = std::max(reach, dist(p, ci));
    if (item->key > 2.0 * reach) break;
    const Point2D ck = sites[k].center;
    const Point2D normal = ck - ci;
    cell = clip_labeled(cell, normal, dot(0.5 * (ci + ck), normal), k);
    if (cell.v.empty()) break;
  }
  return cell;
}

struct VoronoiResult {
  std::vector<LabeledPolygon> cells;
  std::vector<VoronoiEdge> edges;
  std::vector<std::pair<std::size_t, std::size_t>> edge_sites;
};

MbrIndex center_index_of(std::span<const UncertainDisc> sites) {
  std::vector<IndexEntry> entries;
  entries.reserve(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    entries.push_back({Mbr::of_point(sites[i].center), static_cast<ObjectId>(i)});
  }
  return MbrIndex(std::move(entries));
}

VoronoiResult build_voronoi(std::span<const UncertainDisc> sites, const Mbr& box, const MbrIndex& centers) {
  VoronoiResult r;
  r.cells.reserve(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) r.cells.push_back(voronoi_cell(sites, i, box, centers));
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& cell = r.cells[i];
    for (std::size_t m = 0; m < cell.v.size(); ++m) {
      const std::size_t k = cell.label[m];
      if (k == kBox || k < i) continue;
      const Segment2D seg{cell.v[m], cell.v[(m + 1) % cell.v.size()]};
      if (seg.length() <= kMinEdge) continue;
      r.edges.push_back({sites[i].id, sites[k].id, seg});
      r.edge_sites.push_back({i, k});
    }
  }
  return r;
}

Mbr clip_box(const Mbr& space) {
  return space.inflated(kClipInflation * std::max(space.width(), space.height()));
}

// p_i - p_j at x; NaN when neither can be the nearest neighbor there.
double pair_diff(std::span<const UncertainDisc> objects, ObjectId i, ObjectId j, Point2D x,
                 const KernelConfig& cfg) {
  const double pi = pnn_prob_2d(objects, i, x, cfg);
  const double pj = pnn_prob_2d(objects, j, x, cfg);
  if (pi == 0.0 && pj == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double d = pi - pj;
  return std::abs(d) <= kExactZero ? 0.0 : d;
}

// Root bracketing between an alive point with non-zero difference and a point with
// opposite sign, a tie, or no information. Illinois steps while both ends are alive,
// bisection otherwise.
template <class F>
double bisect(F&& diff, double from, double dfrom, double to, double dto) {
  bool alive_to = !std::isnan(dto) && dto != 0.0;
  int side = 0;
  for (int it = 0; it < 200 && std::abs(to - from) > kSearchWidth; ++it) {
    double x = 0.5 * (from + to);
    if (alive_to) {
      x = from + (to - from) * dfrom / (dfrom - dto);
      // Keep the probe strictly inside so both ends keep moving.
      const double guard = 0.01 * std::abs(to - from);
      const double lo = std::min(from, to) + guard, hi = std::max(from, to) - guard;
      x = std::clamp(x, lo, hi);
    }
    const double dx = diff(x);
    if (dx == 0.0) return x;
    if (std::isnan(dx)) {
      to = x;
      alive_to = false;
    } else if ((dx > 0) != (dfrom > 0)) {
      to = x;
      dto = dx;
      alive_to = true;
      if (side == -1) dfrom *= 0.5;
      side = -1;
    } else {
      from = x;
      dfrom = dx;
      if (side == 1 && alive_to) dto *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (from + to);
}

// Equality points on a line parametrized by t in [-limit, limit], nearest to t=0 in each
// direction. Strides grow from `step` by doubling.
struct LineSearch {
  std::vector<double> crossings;
  bool any_alive = false;
  double alive_sign = 0.0;  // sign of the difference where no crossing was found
};

template <class F>
LineSearch search_line(F&& diff, double limit, double step) {
  LineSearch out;
  const double d0 = diff(0.0);
  if (d0 == 0.0) {
    out.crossings.push_back(0.0);
    out.any_alive = true;
    return out;
  }
  if (!std::isnan(d0)) {
    out.any_alive = true;
    out.alive_sign = d0 > 0 ? 1.0 : -1.0;
  }
  for (double dir : {-1.0, 1.0}) {
    double prev_t = 0.0, prev_d = d0;
    double stride = step;
    double t = 0.0;
    while (std::abs(t) < limit) {
      t = dir * std::min(limit, std::abs(t) + stride);
      stride *= 2.0;
      const double d = diff(t);
      if (std::isnan(d)) continue;
      out.any_alive = true;
      if (out.alive_sign == 0.0 && d != 0.0) out.alive_sign = d > 0 ? 1.0 : -1.0;
      if (!std::isnan(prev_d) && prev_d != 0.0 && (d == 0.0 || (d > 0) != (prev_d > 0))) {
        out.crossings.push_back(d == 0.0 ? t : bisect(diff, prev_t, prev_d, t, d));
        break;
      }
      prev_t = t;
      prev_d = d;
    }
  }
  return out;
}

void widen(PbrBounds& b, double t) {
  b.lval = std::min(b.lval, t);
  b.hval = std::max(b.hval, t);
}

void set_quad(Pbr& pbr) {
  const Point2D n = unit(pbr.cj - pbr.ci);
  const double lo = std::isfinite(pbr.lval) ? pbr.lval : -dist(pbr.ci, pbr.cj);
  const double hi = std::isfinite(pbr.hval) ? pbr.hval : dist(pbr.ci, pbr.cj);
  const Segment2D& s = pbr.edge.seg;
  pbr.quad = {s.a + lo * n, s.b + lo * n, s.b + hi * n, s.a + hi * n};
}

// Interior test with a margin, so points on a PVC boundary fall to the bands.
bool strictly_inside(const Polygon& poly, Point2D q) {
  if (poly.size() < 3) return false;
  for (std::size_t m = 0; m < poly.size(); ++m) {
    const Point2D a = poly[m], e = poly[(m + 1) % poly.size()] - a;
    if (cross(e, q - a) <= kBoundaryTolerance * norm(e)) return false;
  }
  return true;
}

void write_number(std::ostream& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

Polygon clip_halfplane(const Polygon& poly, Point2D normal, double offset) {
  LabeledPolygon lp{poly, std::vector<std::size_t>(poly.size(), kBox)};
  return clip_labeled(lp, normal, offset, kBox).v;
}

bool polygon_contains(const Polygon& poly, Point2D q) {
  if (poly.size() < 3) return false;
  for (std::size_t m = 0; m < poly.size(); ++m) {
    const Point2D a = poly[m], b = poly[(m + 1) % poly.size()];
    const Point2D e = b - a;
    // Relative tolerance keeps points on shared edges inside both cells.
    if (cross(e, q - a) < -1e-12 * norm(e) * (1.0 + norm(q - a))) return false;
  }
  return true;
}

Mbr polygon_mbr(const Polygon& poly) {
  if (poly.empty()) return {{kInf, kInf}, {-kInf, -kInf}};
  Mbr box = Mbr::of_point(poly.front());
  for (const Point2D& p : poly) box = box.merged(Mbr::of_point(p));
  return box;
}

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t m = 0; m < poly.size(); ++m) a += cross(poly[m], poly[(m + 1) % poly.size()]);
  return 0.5 * a;
}

double pair_offset(Point2D ci, Point2D cj, Point2D x) {
  return dot(x - 0.5 * (ci + cj), unit(cj - ci));
}

std::vector<VoronoiEdge> center_voronoi(std::span<const UncertainDisc> objects, const Mbr& space) {
  if (objects.size() < 2) return {};
  return build_voronoi(objects, space, center_index_of(objects)).edges;
}

std::vector<VoronoiCell> center_voronoi_cells(std::span<const UncertainDisc> objects, const Mbr& space) {
  const auto r = build_voronoi(objects, space, center_index_of(objects));
  std::vector<VoronoiCell> out(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    out[i].id = objects[i].id;
    out[i].poly = r.cells[i].v;
  }
  for (auto [a, b] : r.edge_sites) {
    out[a].neighbors.push_back(objects[b].id);
    out[b].neighbors.push_back(objects[a].id);
  }
  return out;
}

PbrBounds init_pbr_bound(const UncertainDisc& oi, const UncertainDisc& oj, const VoronoiEdge&,
                         const KernelConfig& cfg) {
  if (std::abs(oi.radius - oj.radius) <= kLengthTolerance) return {};
  const std::array<UncertainDisc, 2> pair{oi, oj};
  const Point2D mid = 0.5 * (oi.center + oj.center);
  const Point2D n = unit(oj.center - oi.center);
  const double half = 0.5 * dist(oi.center, oj.center);
  auto diff = [&](double t) { return pair_diff(pair, oi.id, oj.id, mid + t * n, cfg); };
  const LineSearch s = search_line(diff, half, cfg.step);
  if (s.crossings.empty()) {
    throw std::runtime_error("pair equality point is not between the centers");
  }
  PbrBounds b;
  for (double t : s.crossings) widen(b, t);
  return b;
}

std::vector<Segment2D> find_influenced_part(const UncertainDisc& oi, const UncertainDisc& oj,
                                            const VoronoiEdge& edge,
                                            std::span<const UncertainDisc> objects) {
  const UncertainDisc& small = oi.radius <= oj.radius ? oi : oj;
  const Segment2D& seg = edge.seg;
  const Point2D d = seg.b - seg.a;
  std::vector<std::pair<double, double>> parts;

  for (const auto& ok : objects) {
    if (ok.id == oi.id || ok.id == oj.id) continue;
    const double R = small.radius + ok.radius;
    // f(t) = |s-c_k| - |s-c_small| - R; o_k influences where f < 0.
    auto f = [&](double t) {
      const Point2D s = seg.at(t);
      return dist(s, ok.center) - dist(s, small.center) - R;
    };
    // Roots: |s-c_k|^2 - |s-c_small|^2 - R^2 = 2R|s-c_small|, left side linear in t.
    const Point2D ak = seg.a - ok.center, as = seg.a - small.center;
    const double alpha = dot(ak, ak) - dot(as, as) - R * R;
    const double beta = 2.0 * (dot(ak, d) - dot(as, d));
    // (alpha + beta t)^2 = 4R^2 (|as|^2 + 2 t as.d + t^2 |d|^2)
    const double qa = beta * beta - 4 * R * R * dot(d, d);
    const double qb = 2 * alpha * beta - 8 * R * R * dot(as, d);
    const double qc = alpha * alpha - 4 * R * R * dot(as, as);
    std::vector<double> cuts{0.0, 1.0};
    if (std::abs(qa) > 1e-12 * (std::abs(qb) + std::abs(qc) + 1.0)) {
      const double disc = qb * qb - 4 * qa * qc;
      if (disc >= 0) {
        const double sq = std::sqrt(disc);
        for (double t : {(-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)}) {
          if (t > 0 && t < 1) cuts.push_back(t);
        }
      }
    } else if (std::abs(qb) > 0) {
      const double t = -qc / qb;
      if (t > 0 && t < 1) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t m = 0; m + 1 < cuts.size(); ++m) {
      if (cuts[m + 1] - cuts[m] <= 0) continue;
      if (f(0.5 * (cuts[m] + cuts[m + 1])) < 0) parts.push_back({cuts[m], cuts[m + 1]});
    }
  }

  std::sort(parts.begin(), parts.end());
  std::vector<std::pair<double, double>> merged;
  for (auto p : parts) {
    if (!merged.empty() && p.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, p.second);
    } else {
      merged.push_back(p);
    }
  }
  std::vector<Segment2D> out;
  for (auto [a, b] : merged) out.push_back({seg.at(a), seg.at(b)});
  return out;
}

PbrBounds update_pbr_bound(PbrBounds bounds, const Segment2D& segment, const UncertainDisc& oi,
                           const UncertainDisc& oj, std::span<const UncertainDisc> objects,
                           const KernelConfig& cfg) {
  const Point2D n = unit(oj.center - oi.center);
  const double limit = 0.25 * dist(oi.center, oj.center);
  for (double s : {0.0, 0.5, 1.0}) {
    const Point2D station = segment.at(s);
    // Project onto the bisector line so offsets are measured from the edge.
    const Point2D base = station - pair_offset(oi.center, oj.center, station) * n;
    // Objects beyond the largest maxdist to o_i along the search line cannot matter.
    const Segment2D line{base - limit * n, base + limit * n};
    const double reach = dist(base, oi.center) + limit + oi.radius;
    std::vector<UncertainDisc> near;
    for (const auto& o : objects) {
      if (point_segment_distance(o.center, line) - o.radius < reach) near.push_back(o);
    }
    auto diff = [&](double t) { return pair_diff(near, oi.id, oj.id, base + t * n, cfg); };
    const LineSearch ls = search_line(diff, limit, cfg.step);
    for (double t : ls.crossings) widen(bounds, t);
    if (ls.crossings.empty() && ls.any_alive) {
      // o_i ahead everywhere means the curve lies further toward c_j, and vice versa.
      widen(bounds, ls.alive_sign > 0 ? limit : -limit);
      bounds.flagged = true;
    }
  }
  return bounds;
}

Pbr prob_bisector_2d(const UncertainDisc& oi, const UncertainDisc& oj, const VoronoiEdge& edge,
                     std::span<const UncertainDisc> objects, const KernelConfig& cfg) {
  Pbr pbr;
  pbr.i = oi.id;
  pbr.j = oj.id;
  pbr.edge = edge;
  pbr.ci = oi.center;
  pbr.cj = oj.center;
  PbrBounds b;
  if (std::abs(oi.radius - oj.radius) > kLengthTolerance) {
    try {
      b = init_pbr_bound(oi, oj, edge, cfg);
    } catch (const std::runtime_error&) {
      b = {-kInf, kInf, true};
    }
    if (std::isfinite(b.lval)) {
      for (const auto& part : find_influenced_part(oi, oj, edge, objects)) {
        b = update_pbr_bound(b, part, oi, oj, objects, cfg);
      }
      // Stations sample a curve; pad by the kernel resolution.
      b.lval -= cfg.step;
      b.hval += cfg.step;
    }
  }
  pbr.lval = b.lval;
  pbr.hval = b.hval;
  pbr.flagged = b.flagged;
  set_quad(pbr);
  return pbr;
}

std::vector<UncertainDisc> prune_coincident(std::span<const UncertainDisc> objects) {
  std::map<std::pair<double, double>, UncertainDisc> best;
  for (const auto& o : objects) {
    auto [it, fresh] = best.try_emplace({o.center.x, o.center.y}, o);
    if (fresh) continue;
    const auto& cur = it->second;
    if (o.radius < cur.radius || (o.radius == cur.radius && o.id < cur.id)) it->second = o;
  }
  std::vector<UncertainDisc> out;
  for (const auto& o : objects) {
    if (best.at({o.center.x, o.center.y}).id == o.id) out.push_back(o);
  }
  return out;
}

std::size_t Pvd2D::nearest_site(Point2D q) const {
  IoCounter io;
  auto scan = center_index.mindist_scan(q, io);
  const auto first = scan.next();
  if (!first) throw std::logic_error("empty diagram");
  return static_cast<std::size_t>(first->id);
}

Pvd2D prob_voronoi_2d(std::span<const UncertainDisc> objects, const Mbr& space, const KernelConfig& cfg) {
  cfg.validate();
  for (const auto& o : objects) validate(o);
  Pvd2D pvd;
  pvd.space = space;
  pvd.objects.assign(objects.begin(), objects.end());
  pvd.sites = prune_coincident(objects);
  const std::size_t n = pvd.sites.size();
  for (std::size_t i = 0; i < n; ++i) pvd.site_index[pvd.sites[i].id] = i;
  pvd.center_index = center_index_of(pvd.sites);

  pvd.hidden.resize(n);
  for (const auto& o : pvd.objects) {
    const std::size_t i = pvd.nearest_site(o.center);
    if (pvd.sites[i].center == o.center && o.radius > pvd.sites[i].radius) pvd.hidden[i].push_back(o.id);
  }

  const auto vor = build_voronoi(pvd.sites, clip_box(space), pvd.center_index);
  pvd.site_pbrs.resize(n);
  // Edges are computed in the inflated box; the cells themselves stop at the data space.
  for (std::size_t i = 0; i < n; ++i) {
    Polygon cell = vor.cells[i].v;
    cell = clip_halfplane(cell, {1, 0}, space.hi.x);
    cell = clip_halfplane(cell, {-1, 0}, -space.lo.x);
    cell = clip_halfplane(cell, {0, 1}, space.hi.y);
    cell = clip_halfplane(cell, {0, -1}, -space.lo.y);
    pvd.cells.push_back(std::move(cell));
  }

  std::vector<IndexEntry> entries;
  double max_radius = 0.0;
  for (std::size_t k = 0; k < pvd.objects.size(); ++k) {
    entries.push_back({Mbr::of(pvd.objects[k]), static_cast<ObjectId>(k)});
    max_radius = std::max(max_radius, pvd.objects[k].radius);
  }
  const MbrIndex object_index(std::move(entries));

  for (std::size_t e = 0; e < vor.edges.size(); ++e) {
    const auto [a, b] = vor.edge_sites[e];
    const UncertainDisc& oi = pvd.sites[a];
    const UncertainDisc& oj = pvd.sites[b];
    const Segment2D& seg = vor.edges[e].seg;
    // Everything that can hold probability within the search limit of the edge.
    const double limit = 0.25 * dist(oi.center, oj.center);
    const double far = std::max(dist(seg.a, oi.center), dist(seg.b, oi.center)) + limit + oi.radius;
    const double reach = far + limit;
    const Mbr window = Mbr::of_point(seg.a).merged(Mbr::of_point(seg.b)).inflated(reach + max_radius);
    IoCounter io;
    std::vector<UncertainDisc> local;
    for (ObjectId k : object_index.window_query(window, io)) {
      const auto& o = pvd.objects[static_cast<std::size_t>(k)];
      if (point_segment_distance(o.center, seg) - o.radius < reach) local.push_back(o);
    }
    pvd.site_pbrs[a].push_back(pvd.pbrs.size());
    pvd.site_pbrs[b].push_back(pvd.pbrs.size());
    Pbr pbr = prob_bisector_2d(oi, oj, vor.edges[e], local, cfg);
    // A pruned concentric disc can win across this edge too; its band widens this one.
    auto by_id = [&](ObjectId id) -> const UncertainDisc& {
      return *std::find_if(local.begin(), local.end(), [&](const UncertainDisc& o) { return o.id == id; });
    };
    for (ObjectId h : pvd.hidden[a]) {
      const Pbr extra = prob_bisector_2d(by_id(h), oj, vor.edges[e], local, cfg);
      pbr.lval = std::min(pbr.lval, extra.lval);
      pbr.hval = std::max(pbr.hval, extra.hval);
      pbr.flagged = pbr.flagged || extra.flagged;
    }
    for (ObjectId h : pvd.hidden[b]) {
      const Pbr extra = prob_bisector_2d(oi, by_id(h), vor.edges[e], local, cfg);
      pbr.lval = std::min(pbr.lval, extra.lval);
      pbr.hval = std::max(pbr.hval, extra.hval);
      pbr.flagged = pbr.flagged || extra.flagged;
    }
    set_quad(pbr);
    pvd.pbrs.push_back(std::move(pbr));
  }

  for (std::size_t i = 0; i < n; ++i) {
    Polygon pvc = pvd.hidden[i].empty() ? pvd.cells[i] : Polygon{};
    for (std::size_t p : pvd.site_pbrs[i]) {
      const Pbr& pbr = pvd.pbrs[p];
      const Point2D nrm = unit(pbr.cj - pbr.ci);
      const double base = dot(0.5 * (pbr.ci + pbr.cj), nrm);
      if (pbr.i == pvd.sites[i].id) {
        pvc = std::isfinite(pbr.lval) ? clip_halfplane(pvc, nrm, base + pbr.lval) : Polygon{};
      } else {
        pvc = std::isfinite(pbr.hval) ? clip_halfplane(pvc, -1.0 * nrm, -(base + pbr.hval)) : Polygon{};
      }
      if (pvc.empty()) break;
    }
    pvd.pvcs.push_back(std::move(pvc));
    pvd.mbrs.push_back(polygon_mbr(pvd.cells[i]));
  }
  return pvd;
}

Location2D locate_2d(const Pvd2D& pvd, Point2D q) {
  if (!pvd.space.contains(q)) throw std::out_of_range("query point outside the data space");
  return locate_in_cell(pvd, pvd.nearest_site(q), q);
}

Location2D locate_in_cell(const Pvd2D& pvd, std::size_t i, Point2D q) {
  const ObjectId id = pvd.sites[i].id;
  if (strictly_inside(pvd.pvcs[i], q)) return {Location2D::Kind::Cell, {id}};
  std::vector<ObjectId> owners{id};
  for (std::size_t p : pvd.site_pbrs[i]) {
    const Pbr& pbr = pvd.pbrs[p];
    if (!pbr.strip_contains(q)) continue;
    owners.push_back(pbr.i == id ? pbr.j : pbr.i);
  }
  bool pair = owners.size() == 2;
  for (std::size_t k = 0, count = owners.size(); k < count; ++k) {
    const auto& extra = pvd.hidden[pvd.site_index.at(owners[k])];
    pair = pair && extra.empty();
    owners.insert(owners.end(), extra.begin(), extra.end());
  }
  return {pair ? Location2D::Kind::Pbr : Location2D::Kind::MultiPbr, owners};
}

void write_pvd_2d(std::ostream& out, const Pvd2D& pvd) {
  for (std::size_t i = 0; i < pvd.sites.size(); ++i) {
    out << "pvc " << pvd.sites[i].id;
    for (const Point2D& p : pvd.pvcs[i]) {
      out << ' ';
      write_number(out, p.x);
      out << ' ';
      write_number(out, p.y);
    }
    out << '\n';
  }
  for (const Pbr& pbr : pvd.pbrs) {
    out << "pbr " << pbr.i << ' ' << pbr.j << ' ';
    write_number(out, pbr.lval);
    out << ' ';
    write_number(out, pbr.hval);
    for (const Point2D& p : pbr.quad) {
      out << ' ';
      write_number(out, p.x);
      out << ' ';
      write_number(out, p.y);
    }
    out << '\n';
  }
}

}  // namespace pvd
