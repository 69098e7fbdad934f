#include "pvd/pvd1d.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

namespace pvd {

namespace {

constexpr double kSearchWidth = 1e-6;  // final bracket width of the binary search
constexpr double kExactZero = 1e-12;
constexpr double kMergeWidth = 1e-4;     // crossings closer than this are one crossing
constexpr double kCompletionPiece = 10.0;  // query segment length for pair completion

class PairDiff {
 public:
  PairDiff(const UncertainInterval& a, const UncertainInterval& b,
           std::span<const UncertainInterval> objects, const KernelConfig& cfg)
      : a_(a), b_(b), objects_(objects), cfg_(cfg) {}

  // NaN where neither object can be the nearest neighbor.
  double operator()(double x) const {
    const double pa = pnn_prob_1d(objects_, a_.id, x, cfg_);
    const double pb = pnn_prob_1d(objects_, b_.id, x, cfg_);
    if (pa == 0.0 && pb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::abs(pa - pb) <= kExactZero ? 0.0 : pa - pb;
  }

 private:
  const UncertainInterval& a_;
  const UncertainInterval& b_;
  std::span<const UncertainInterval> objects_;
  const KernelConfig& cfg_;
};

bool opposite(double u, double v) { return (u > 0.0 && v < 0.0) || (u < 0.0 && v > 0.0); }

// `from` holds a non-zero difference; `to` holds the opposite sign, a tie, or NaN.
double bisect(const PairDiff& diff, double from, double dfrom, double to) {
  for (int it = 0; it < 200 && std::abs(to - from) > kSearchWidth; ++it) {
    const double mid = 0.5 * (from + to);
    const double dm = diff(mid);
    if (std::isnan(dm) || dm == 0.0 || opposite(dm, dfrom)) {
      to = mid;
    } else {
      from = mid;
      dfrom = dm;
    }
  }
  return 0.5 * (from + to);
}

// Left object of the crossing at x, judged by the pair's ranking just beside it.
ObjectId left_of(const PairDiff& diff, const UncertainInterval& a, const UncertainInterval& b,
                 double x) {
  double fallback = 0.0;
  for (double delta : {1e-4, 1e-3, 1e-2, 0.1, 1.0}) {
    const double l = diff(x - delta), r = diff(x + delta);
    if (opposite(l, r)) return l > 0.0 ? a.id : b.id;
    if (fallback == 0.0 && !std::isnan(l) && l != 0.0) fallback = l;
    if (fallback == 0.0 && !std::isnan(r) && r != 0.0) fallback = -r;
  }
  if (fallback > 0.0) return a.id;
  if (fallback < 0.0) return b.id;
  return a.mid() <= b.mid() ? a.id : b.id;
}

// Sign changes of the pair difference sampled every h over the range where either
// object can win.
std::vector<double> scan_crossings(const PairDiff& diff, const UncertainInterval& a,
                                   const UncertainInterval& b,
                                   std::span<const UncertainInterval> objects, double h) {
  const double span_lo = std::min(a.lower, b.lower), span_hi = std::max(a.upper, b.upper);
  double glo = span_lo, ghi = span_hi;
  for (const auto& o : objects) {
    glo = std::min(glo, o.lower);
    ghi = std::max(ghi, o.upper);
  }
  auto reach = [&](double from, double limit, double dir) {
    for (double stride = 1.0;; stride *= 2.0) {
      const double x = from + dir * stride;
      if (dir * (x - limit) >= 0.0) return limit;
      if (std::isnan(diff(x))) return x;
    }
  };
  const double lo = reach(span_lo, glo, -1.0), hi = reach(span_hi, ghi, 1.0);
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));

  std::vector<double> out;
  double px = 0.0, pd = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k <= n; ++k) {
    const double x = lo + (hi - lo) * k / n;
    const double d = diff(x);
    if (std::isnan(d) || d == 0.0) continue;
    if (opposite(d, pd)) out.push_back(bisect(diff, px, pd, x));
    px = x;
    pd = d;
  }
  return out;
}

}  // namespace

std::optional<std::vector<double>> bisector_by_lemma(const UncertainInterval& a,
                                                     const UncertainInterval& b) {
  auto same = [](double u, double v) { return std::abs(u - v) <= kLengthTolerance; };
  if (same(a.lower, b.lower) && same(a.upper, b.upper)) return std::vector<double>{};
  const auto cls = classify_pair(a, b);
  if (cls.equi_range || !cls.overlapping) return std::vector<double>{0.5 * (a.mid() + b.mid())};
  const auto& big = a.length() >= b.length() ? a : b;
  const auto& small = a.length() >= b.length() ? b : a;
  if (same(a.lower, b.lower)) return std::vector<double>{0.5 * (big.mid() + small.upper)};
  if (same(a.upper, b.upper)) return std::vector<double>{0.5 * (big.mid() + small.lower)};
  if (same(a.mid(), b.mid())) {
    return std::vector<double>{0.5 * (a.lower + b.lower), 0.5 * (a.upper + b.upper)};
  }
  return std::nullopt;
}

bool third_object_interferes(const UncertainInterval& a, const UncertainInterval& b, double x,
                             std::span<const UncertainInterval> objects) {
  const double lo = std::min(a.lower, b.lower), hi = std::max(a.upper, b.upper);
  const double reach = std::max(maxdist(x, a), maxdist(x, b));
  for (const auto& o : objects) {
    if (o.id == a.id || o.id == b.id) continue;
    if (o.upper > lo && o.lower < hi) return true;
    if (mindist(x, o) < reach) return true;
  }
  return false;
}

std::vector<double> initial_bisector(const UncertainInterval& a, const UncertainInterval& b) {
  const bool a_first = a.lower < b.lower || (a.lower == b.lower && a.upper <= b.upper);
  const auto& i = a_first ? a : b;
  const auto& j = a_first ? b : a;
  if (i.upper < j.lower) return {0.5 * (i.mid() + j.mid())};
  if (i.lower < j.lower && j.upper < i.upper) {
    return {0.5 * (i.lower + j.lower), 0.5 * (i.upper + j.upper)};
  }
  if (i.lower == j.lower) return {0.5 * (j.mid() + i.upper)};
  if (i.upper == j.upper) return {0.5 * (i.mid() + j.lower)};
  if (j.lower - i.lower < j.upper - i.upper) return {0.5 * (j.mid() + i.upper)};
  return {0.5 * (i.mid() + j.lower)};
}

double find_prob_bisector_1d(const UncertainInterval& a, const UncertainInterval& b, double ipb,
                             std::span<const UncertainInterval> objects, const KernelConfig& cfg) {
  const PairDiff diff(a, b, objects, cfg);
  const double span_lo = std::min(a.lower, b.lower), span_hi = std::max(a.upper, b.upper);
  ipb = std::clamp(ipb, span_lo, span_hi);
  // Beyond every object the difference is constant; beyond the pair's span a dead
  // position stays dead further out.
  double lo = span_lo, hi = span_hi;
  for (const auto& o : objects) {
    lo = std::min(lo, o.lower);
    hi = std::max(hi, o.upper);
  }
  const double d0 = diff(ipb);
  if (d0 == 0.0) return ipb;

  if (std::abs(d0) <= cfg.prob_epsilon) {
    for (double x : {ipb - cfg.step, ipb + cfg.step}) {
      x = std::clamp(x, lo, hi);
      if (opposite(diff(x), d0)) return bisect(diff, ipb, d0, x);
    }
    return ipb;
  }

  // The less probable object gains ground when q moves toward it.
  const double toward_b = b.mid() >= a.mid() ? 1.0 : -1.0;
  const double preferred = d0 > 0.0 ? toward_b : -toward_b;
  // Both directions advance together so the nearest swap wins.
  struct Walk {
    double dir, prev, dprev;
    bool open = true;
  };
  Walk walks[2] = {{preferred, ipb, d0}, {-preferred, ipb, d0}};
  for (double stride = 1.0; walks[0].open || walks[1].open; stride *= 2.0) {
    for (auto& w : walks) {
      if (!w.open) continue;
      const double x = std::clamp(ipb + w.dir * stride, lo, hi);
      const double dx = diff(x);
      if ((dx == 0.0 && !std::isnan(w.dprev)) || opposite(dx, w.dprev)) {
        return bisect(diff, w.prev, w.dprev, x);
      }
      if (!std::isnan(dx)) {
        w.prev = x;
        w.dprev = dx;
      }
      const bool outside = x < span_lo || x > span_hi;
      if (x == lo || x == hi || (outside && std::isnan(dx))) w.open = false;
    }
  }
  throw NoBisectorFound("no ranking swap between objects " + std::to_string(a.id) + " and " +
                        std::to_string(b.id));
}

std::vector<Bisector1D> prob_bisector_1d(const UncertainInterval& a, const UncertainInterval& b,
                                         std::span<const UncertainInterval> objects,
                                         const KernelConfig& cfg) {
  if (a.id == b.id) throw std::invalid_argument("bisector of an object with itself");
  const PairDiff diff(a, b, objects, cfg);
  const auto lemma = bisector_by_lemma(a, b);
  if (lemma && lemma->empty()) return {};

  std::vector<double> seeds;
  if (lemma && classify_pair(a, b).equi_range) {
    // Mirror symmetry makes the midpoint exact whatever else is present.
    const double x = lemma->front();
    const ObjectId left = left_of(diff, a, b, x);
    return {{x, left, left == a.id ? b.id : a.id}};
  }
  if (lemma && std::none_of(lemma->begin(), lemma->end(), [&](double x) {
        return third_object_interferes(a, b, x, objects);
      })) {
    seeds = *lemma;
  } else {
    seeds = initial_bisector(a, b);
  }

  std::vector<double> found;
  for (double seed : seeds) {
    try {
      found.push_back(find_prob_bisector_1d(a, b, seed, objects, cfg));
    } catch (const NoBisectorFound&) {
    }
  }
  // Seeds can converge on the same swap; a step-spaced scan recovers the others.
  for (double x : scan_crossings(diff, a, b, objects, cfg.step)) found.push_back(x);
  std::sort(found.begin(), found.end());

  std::vector<Bisector1D> out;
  for (double x : found) {
    if (!out.empty() && x - out.back().position <= kMergeWidth) continue;
    const ObjectId left = left_of(diff, a, b, x);
    out.push_back({x, left, left == a.id ? b.id : a.id});
  }
  return out;
}

std::vector<UncertainInterval> candidate_objects(std::span<const UncertainInterval> sorted,
                                                 const UncertainInterval& oi, double pb) {
  const double d = std::abs(pb - oi.lower);
  std::vector<UncertainInterval> out;
  for (const auto& o : sorted) {
    if (o.id != oi.id && std::abs(pb - o.lower) <= d) out.push_back(o);
  }
  return out;
}

std::vector<UncertainInterval> sorted_unique(std::span<const UncertainInterval> objects) {
  std::vector<UncertainInterval> out(objects.begin(), objects.end());
  for (const auto& o : out) validate(o);
  std::sort(out.begin(), out.end(), [](const auto& u, const auto& v) {
    if (u.lower != v.lower) return u.lower < v.lower;
    if (u.upper != v.upper) return u.upper < v.upper;
    return u.id < v.id;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& u, const auto& v) { return u.lower == v.lower && u.upper == v.upper; }),
            out.end());
  return out;
}

Pvd1D assemble_pvd_1d(std::vector<Bisector1D> candidates, std::span<const UncertainInterval> objects,
                      Extent1D extent, const KernelConfig& cfg) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& u, const auto& v) { return u.position < v.position; });
  Pvd1D pvd;
  pvd.extent = extent;
  ObjectId current = top1_pnn(objects, extent.lo, cfg).id;
  pvd.cells.push_back(current);
  for (const auto& b : candidates) {
    if (b.position <= extent.lo || b.position >= extent.hi || b.left != current) continue;
    current = b.right;
    if (!pvd.bisectors.empty() && b.position - pvd.bisectors.back().position <= kLengthTolerance) {
      pvd.bisectors.back().right = current;
      pvd.cells.back() = current;
      if (pvd.bisectors.back().left == current) {
        pvd.bisectors.pop_back();
        pvd.cells.pop_back();
      }
      continue;
    }
    pvd.bisectors.push_back(b);
    pvd.cells.push_back(current);
  }
  return pvd;
}

Pvd1D prob_voronoi_1d(std::span<const UncertainInterval> objects, Extent1D extent,
                      const KernelConfig& cfg) {
  cfg.validate();
  if (!(extent.lo < extent.hi)) throw std::invalid_argument("empty extent");
  const auto objs = sorted_unique(objects);
  if (objs.empty()) throw std::invalid_argument("no objects");

  std::map<std::pair<ObjectId, ObjectId>, std::vector<Bisector1D>> memo;
  std::vector<Bisector1D> candidates;
  auto pair_bisectors = [&](const UncertainInterval& u, const UncertainInterval& v) -> const auto& {
    const auto key = std::minmax(u.id, v.id);
    auto it = memo.find(key);
    if (it == memo.end()) {
      it = memo.emplace(key, prob_bisector_1d(u, v, objs, cfg)).first;
      candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
    return it->second;
  };

  for (std::size_t i = 0; i + 1 < objs.size(); ++i) {
    const auto& oi = objs[i];
    const auto succ = pair_bisectors(oi, objs[i + 1]);
    if (succ.empty()) {
      for (const auto& o : objs) {
        if (o.id != oi.id) pair_bisectors(oi, o);
      }
      continue;
    }
    for (const auto& b : succ) {
      for (const auto& o : candidate_objects(objs, oi, b.position)) pair_bisectors(oi, o);
    }
  }
  // Completion: any two objects that can both hold non-zero probability for some q in
  // a short query segment are paired.
  std::vector<double> events{extent.lo, extent.hi};
  for (const auto& o : objs) {
    events.push_back(std::clamp(o.lower, extent.lo, extent.hi));
    events.push_back(std::clamp(o.upper, extent.lo, extent.hi));
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  std::vector<const UncertainInterval*> live;
  for (std::size_t e = 0; e + 1 < events.size(); ++e) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((events[e + 1] - events[e]) / kCompletionPiece)));
    for (int k = 0; k < pieces; ++k) {
      const double x0 = events[e] + (events[e + 1] - events[e]) * k / pieces;
      const double x1 = events[e] + (events[e + 1] - events[e]) * (k + 1) / pieces;
      double reach = std::numeric_limits<double>::infinity();
      for (const auto& o : objs) reach = std::min(reach, std::max(maxdist(x0, o), maxdist(x1, o)));
      live.clear();
      for (const auto& o : objs) {
        if (o.upper >= x0 - reach && o.lower <= x1 + reach) live.push_back(&o);
      }
      for (std::size_t u = 0; u < live.size(); ++u) {
        for (std::size_t v = u + 1; v < live.size(); ++v) pair_bisectors(*live[u], *live[v]);
      }
    }
  }
  return assemble_pvd_1d(std::move(candidates), objs, extent, cfg);
}

ObjectId locate_1d(const Pvd1D& pvd, double q) {
  if (!(q >= pvd.extent.lo && q <= pvd.extent.hi)) throw std::out_of_range("query outside extent");
  const auto it = std::upper_bound(pvd.bisectors.begin(), pvd.bisectors.end(), q,
                                   [](double x, const Bisector1D& b) { return x < b.position; });
  return pvd.cells[static_cast<std::size_t>(it - pvd.bisectors.begin())];
}

void write_pvd_1d(std::ostream& out, const Pvd1D& pvd) {
  char buf[32];
  for (const auto& b : pvd.bisectors) {
    const auto res = std::to_chars(buf, buf + sizeof buf, b.position);
    out << "bisector " << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << ' '
        << b.left << ' ' << b.right << '\n';
  }
}

}  // namespace pvd
