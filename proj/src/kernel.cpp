#include "pvd/kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace pvd {

void KernelConfig::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("kernel step must be > 0");
  if (!(prob_epsilon > 0.0 && prob_epsilon < 1.0)) {
    throw std::invalid_argument("prob_epsilon must lie in (0, 1)");
  }
}

namespace {

struct IntervalTraits {
  using Object = UncertainInterval;
  using Query = double;
  // Inside a piece between kinks every distance cdf is linear, so Gauss-Legendre
  // integrates the product exactly.
  static constexpr bool kPolynomialPieces = true;

  static double min_d(double q, const Object& o) { return mindist(q, o); }
  static double max_d(double q, const Object& o) { return maxdist(q, o); }
  static double cdf(double q, double d, const Object& o) {
    return std::min(1.0, covered_length(q, d, o) / o.length());
  }
  static void kinks(double q, const Object& o, std::vector<double>& out) {
    out.push_back(std::abs(q - o.lower));
    out.push_back(std::abs(q - o.upper));
  }
};

struct DiscTraits {
  using Object = UncertainDisc;
  using Query = Point2D;
  static constexpr bool kPolynomialPieces = false;

  static double min_d(Point2D q, const Object& o) { return mindist(q, o); }
  static double max_d(Point2D q, const Object& o) { return maxdist(q, o); }
  static double cdf(Point2D q, double d, const Object& o) {
    return std::min(1.0, lens_area(q, d, o) / o.area());
  }
  static void kinks(Point2D q, const Object& o, std::vector<double>& out) {
    const double cd = dist(q, o.center);
    out.push_back(std::abs(cd - o.radius));
    out.push_back(cd + o.radius);
  }
};

template <class Traits>
using ObjectSpan = std::span<const typename Traits::Object>;

template <class Traits>
std::size_t index_of(ObjectSpan<Traits> objects, ObjectId id) {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].id == id) return i;
  }
  throw std::out_of_range("unknown object id " + std::to_string(id));
}

template <class Traits>
double survival(const std::vector<const typename Traits::Object*>& others, typename Traits::Query q,
                double d) {
  double s = 1.0;
  for (const auto* o : others) {
    s *= 1.0 - Traits::cdf(q, d, *o);
    if (s == 0.0) break;
  }
  return s;
}

template <int N, class F>
double gauss_integrate(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, N>::integrate(f, a, b);
}

// Integral of g_i(d) * S(d) over one piece where g_i is constant.
template <class Traits>
double integrate_polynomial_piece(const typename Traits::Object& oi,
                                  const std::vector<const typename Traits::Object*>& others,
                                  typename Traits::Query q, double a, double b) {
  const double mass = Traits::cdf(q, b, oi) - Traits::cdf(q, a, oi);
  if (mass <= 0.0) return 0.0;
  const double density = mass / (b - a);
  auto f = [&](double d) { return survival<Traits>(others, q, d); };
  const std::size_t degree = others.size();
  if (degree == 0) return mass;
  if (degree <= 13) return density * gauss_integrate<7>(f, a, b);
  if (degree <= 29) return density * gauss_integrate<15>(f, a, b);
  // Beyond degree 59 the rule is no longer exact; split into panels.
  const int panels = static_cast<int>(degree / 59) + 1;
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) total += gauss_integrate<30>(f, a + p * h, a + (p + 1) * h);
  return density * total;
}

template <class Traits>
double integrate_shells(const typename Traits::Object& oi,
                        const std::vector<const typename Traits::Object*>& others,
                        typename Traits::Query q, double a, double b, double step) {
  const int shells = std::max(1, static_cast<int>(std::ceil((b - a) / step - 1e-9)));
  const double h = (b - a) / shells;
  double total = 0.0;
  double lo_cdf = Traits::cdf(q, a, oi);
  for (int s = 0; s < shells; ++s) {
    const double hi = (s + 1 == shells) ? b : a + (s + 1) * h;
    const double hi_cdf = Traits::cdf(q, hi, oi);
    const double mass = hi_cdf - lo_cdf;
    lo_cdf = hi_cdf;
    if (mass <= 0.0) continue;
    total += mass * survival<Traits>(others, q, a + (s + 0.5) * h);
  }
  return total;
}

template <class Traits>
double probability_of(ObjectSpan<Traits> objects, std::size_t i, typename Traits::Query q,
                      double cut, const KernelConfig& cfg) {
  const auto& oi = objects[i];
  const double lo = Traits::min_d(q, oi);
  const double hi = Traits::max_d(q, oi);
  if (lo >= cut) return 0.0;

  std::vector<const typename Traits::Object*> others;
  for (std::size_t j = 0; j < objects.size(); ++j) {
    if (j != i && Traits::min_d(q, objects[j]) < hi) others.push_back(&objects[j]);
  }

  double p = 0.0;
  if (cfg.mode == KernelMode::DiscreteUnit) {
    const auto first = static_cast<long>(std::floor(lo));
    const auto last = std::max(first + 1, static_cast<long>(std::ceil(hi)));
    double prev = Traits::cdf(q, static_cast<double>(first), oi);
    for (long b = first; b < last; ++b) {
      const double edge = static_cast<double>(b + 1);
      const double next = Traits::cdf(q, edge, oi);
      const double mass = next - prev;
      prev = next;
      if (mass > 0.0) p += mass * survival<Traits>(others, q, edge);
    }
  } else {
    // Below every other mindist the survival product is 1; beyond any other maxdist it is 0.
    double free = hi, stop = hi;
    for (const auto* o : others) {
      free = std::min(free, Traits::min_d(q, *o));
      stop = std::min(stop, Traits::max_d(q, *o));
    }
    free = std::max(free, lo);
    p = Traits::cdf(q, free, oi) - Traits::cdf(q, lo, oi);
    std::vector<double> cuts{free, stop};
    Traits::kinks(q, oi, cuts);
    for (const auto* o : others) Traits::kinks(q, *o, cuts);
    std::sort(cuts.begin(), cuts.end());
    double a = free;
    for (double c : cuts) {
      if (a >= stop) break;
      if (c <= a) continue;
      const double b = std::min(c, stop);
      if constexpr (Traits::kPolynomialPieces) {
        p += integrate_polynomial_piece<Traits>(oi, others, q, a, b);
      } else {
        p += integrate_shells<Traits>(oi, others, q, a, b, cfg.step);
      }
      a = b;
    }
  }
  return std::clamp(p, 0.0, 1.0);
}

template <class Traits>
double min_maxdist(ObjectSpan<Traits> objects, typename Traits::Query q) {
  double cut = std::numeric_limits<double>::infinity();
  for (const auto& o : objects) cut = std::min(cut, Traits::max_d(q, o));
  return cut;
}

template <class Traits>
double prob_generic(ObjectSpan<Traits> objects, ObjectId id, typename Traits::Query q,
                    const KernelConfig& cfg) {
  const std::size_t i = index_of<Traits>(objects, id);
  return probability_of<Traits>(objects, i, q, min_maxdist<Traits>(objects, q), cfg);
}

template <class Traits>
std::vector<ProbResult> candidates_generic(ObjectSpan<Traits> objects, typename Traits::Query q,
                                           const KernelConfig& cfg) {
  const double cut = min_maxdist<Traits>(objects, q);
  std::vector<ProbResult> out;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (Traits::min_d(q, objects[i]) < cut) {
      out.push_back({objects[i].id, probability_of<Traits>(objects, i, q, cut, cfg)});
    }
  }
  return out;
}

ProbResult best_of(const std::vector<ProbResult>& c) {
  ProbResult best = c.front();
  for (const auto& r : c) {
    if (r.probability > best.probability || (r.probability == best.probability && r.id < best.id)) {
      best = r;
    }
  }
  return best;
}

template <class Traits>
ProbResult top1_generic(ObjectSpan<Traits> objects, typename Traits::Query q, const KernelConfig& cfg) {
  if (objects.empty()) throw std::invalid_argument("top1_pnn on an empty object set");
  return best_of(candidates_generic<Traits>(objects, q, cfg));
}

template <class Traits>
double gap_generic(ObjectSpan<Traits> objects, typename Traits::Query q, const KernelConfig& cfg) {
  if (objects.empty()) throw std::invalid_argument("top2_gap on an empty object set");
  auto c = candidates_generic<Traits>(objects, q, cfg);
  double first = 0.0, second = 0.0;
  for (const auto& r : c) {
    if (r.probability > first) {
      second = first;
      first = r.probability;
    } else if (r.probability > second) {
      second = r.probability;
    }
  }
  return first - second;
}

template <class Traits>
TopKResult<typename Traits::Object> topk_generic(MindistStream<typename Traits::Object>& store,
                                                 typename Traits::Query q, int k,
                                                 const KernelConfig& cfg) {
  using Object = typename Traits::Object;
  if (k < 1) throw std::invalid_argument("topk_pnn needs k >= 1");
  TopKResult<Object> out;
  std::vector<double> maxds;  // kept sorted ascending

  auto kth_maxdist = [&] {
    return maxds.size() >= static_cast<std::size_t>(k) ? maxds[k - 1]
                                                       : std::numeric_limits<double>::infinity();
  };
  while (const Object* next = store.peek()) {
    if (maxds.size() >= static_cast<std::size_t>(k) && Traits::min_d(q, *next) > kth_maxdist()) break;
    out.retrieved.push_back(*next);
    maxds.insert(std::upper_bound(maxds.begin(), maxds.end(), Traits::max_d(q, *next)),
                 Traits::max_d(q, *next));
    store.pop();
  }
  out.truncated = out.retrieved.size() < static_cast<std::size_t>(k);
  if (out.retrieved.empty()) return out;

  // Objects overlapping a candidate's distance range change its probability.
  const double cut = maxds.front();
  double reach = 0.0;
  for (const auto& o : out.retrieved) {
    if (Traits::min_d(q, o) < cut) reach = std::max(reach, Traits::max_d(q, o));
  }
  while (const Object* next = store.peek()) {
    if (Traits::min_d(q, *next) >= reach) break;
    out.retrieved.push_back(*next);
    store.pop();
  }

  const auto probs = candidates_generic<Traits>(std::span<const Object>(out.retrieved), q, cfg);
  struct Ranked {
    ProbResult r;
    double mind;
  };
  std::vector<Ranked> all;
  all.reserve(out.retrieved.size());
  std::size_t pi = 0;
  for (const auto& o : out.retrieved) {
    double p = 0.0;
    if (pi < probs.size() && probs[pi].id == o.id) p = probs[pi++].probability;
    all.push_back({{o.id, p}, Traits::min_d(q, o)});
  }
  std::stable_sort(all.begin(), all.end(), [](const Ranked& a, const Ranked& b) {
    if (a.r.probability != b.r.probability) return a.r.probability > b.r.probability;
    if (a.mind != b.mind) return a.mind < b.mind;
    return a.r.id < b.r.id;
  });
  const std::size_t take = std::min(all.size(), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < take; ++i) out.ranked.push_back(all[i].r);
  return out;
}

double sample_distance(std::mt19937_64& rng, double q, const UncertainInterval& o) {
  std::uniform_real_distribution<double> u(o.lower, o.upper);
  return std::abs(u(rng) - q);
}

double sample_distance(std::mt19937_64& rng, Point2D q, const UncertainDisc& o) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = o.radius * std::sqrt(u(rng));
  const double t = 2.0 * std::numbers::pi * u(rng);
  return dist(q, {o.center.x + r * std::cos(t), o.center.y + r * std::sin(t)});
}

template <class Traits>
McEstimate mc_generic(ObjectSpan<Traits> objects, ObjectId id, typename Traits::Query q,
                      std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("mc_oracle needs trials >= 1");
  const std::size_t target = index_of<Traits>(objects, id);
  const double cut = min_maxdist<Traits>(objects, q);
  if (Traits::min_d(q, objects[target]) >= cut) return {0.0, 0.0};
  std::vector<std::size_t> live;
  for (std::size_t j = 0; j < objects.size(); ++j) {
    if (j != target && Traits::min_d(q, objects[j]) < cut) live.push_back(j);
  }
  std::mt19937_64 rng(seed);
  std::int64_t wins = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const double d = sample_distance(rng, q, objects[target]);
    bool nearest = true;
    for (std::size_t j : live) {
      if (sample_distance(rng, q, objects[j]) <= d) {
        nearest = false;
        break;
      }
    }
    wins += nearest ? 1 : 0;
  }
  const double p = static_cast<double>(wins) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

}  // namespace

double pnn_prob_1d(std::span<const UncertainInterval> objects, ObjectId id, double q,
                   const KernelConfig& cfg) {
  return prob_generic<IntervalTraits>(objects, id, q, cfg);
}

double pnn_prob_2d(std::span<const UncertainDisc> objects, ObjectId id, Point2D q,
                   const KernelConfig& cfg) {
  return prob_generic<DiscTraits>(objects, id, q, cfg);
}

std::vector<ProbResult> pnn_candidates(std::span<const UncertainInterval> objects, double q,
                                       const KernelConfig& cfg) {
  return candidates_generic<IntervalTraits>(objects, q, cfg);
}

std::vector<ProbResult> pnn_candidates(std::span<const UncertainDisc> objects, Point2D q,
                                       const KernelConfig& cfg) {
  return candidates_generic<DiscTraits>(objects, q, cfg);
}

ProbResult top1_pnn(std::span<const UncertainInterval> objects, double q, const KernelConfig& cfg) {
  return top1_generic<IntervalTraits>(objects, q, cfg);
}

ProbResult top1_pnn(std::span<const UncertainDisc> objects, Point2D q, const KernelConfig& cfg) {
  return top1_generic<DiscTraits>(objects, q, cfg);
}

double top2_gap(std::span<const UncertainInterval> objects, double q, const KernelConfig& cfg) {
  return gap_generic<IntervalTraits>(objects, q, cfg);
}

double top2_gap(std::span<const UncertainDisc> objects, Point2D q, const KernelConfig& cfg) {
  return gap_generic<DiscTraits>(objects, q, cfg);
}

template <class Object, class Query>
SortedMindistStream<Object, Query>::SortedMindistStream(std::span<const Object> objects, Query anchor)
    : sorted_(objects.begin(), objects.end()) {
  std::stable_sort(sorted_.begin(), sorted_.end(), [&](const Object& a, const Object& b) {
    const double da = mindist(anchor, a), db = mindist(anchor, b);
    return da != db ? da < db : a.id < b.id;
  });
}

template class SortedMindistStream<UncertainDisc, Point2D>;
template class SortedMindistStream<UncertainInterval, double>;

TopKResult<UncertainDisc> topk_pnn(MindistStream<UncertainDisc>& store, Point2D q_s, int k,
                                   const KernelConfig& cfg) {
  return topk_generic<DiscTraits>(store, q_s, k, cfg);
}

TopKResult<UncertainInterval> topk_pnn(MindistStream<UncertainInterval>& store, double q_s, int k,
                                       const KernelConfig& cfg) {
  return topk_generic<IntervalTraits>(store, q_s, k, cfg);
}

McEstimate mc_oracle(std::span<const UncertainInterval> objects, ObjectId id, double q,
                     std::int64_t trials, std::uint64_t seed) {
  return mc_generic<IntervalTraits>(objects, id, q, trials, seed);
}

McEstimate mc_oracle(std::span<const UncertainDisc> objects, ObjectId id, Point2D q,
                     std::int64_t trials, std::uint64_t seed) {
  return mc_generic<DiscTraits>(objects, id, q, trials, seed);
}

}  // namespace pvd
