#pragma once

#include "pvd/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pvd {

enum class KernelMode {
  // Unit-width distance shells at integer radii: the mass of o_i in shell [b, b+1)
  // times the probability that every other object lies beyond radius b+1.
  DiscreteUnit,
  // Piecewise integration of the nearest-neighbor probability over distance.
  Continuous,
};

struct KernelConfig {
  KernelMode mode = KernelMode::Continuous;
  double step = 0.25;          // integration / search resolution, data-space units
  double prob_epsilon = 1e-4;  // probabilities closer than this count as equal

  void validate() const;
};

struct ProbResult {
  ObjectId id = 0;
  double probability = 0.0;
};

/// Probability that interval `id` is the nearest neighbor of q.
/// Throws std::out_of_range when `id` is not in `objects`.
double pnn_prob_1d(std::span<const UncertainInterval> objects, ObjectId id, double q,
                   const KernelConfig& cfg);

/// Probability that disc `id` is the nearest neighbor of q. Radial integration
/// over [mindist, maxdist]: each shell contributes its lens-area mass of o_i times
/// the product over j != i of the mass of o_j beyond the shell.
double pnn_prob_2d(std::span<const UncertainDisc> objects, ObjectId id, Point2D q,
                   const KernelConfig& cfg);

/// Probabilities of every object that can be the nearest neighbor of q (those
/// with mindist below the smallest maxdist), in input order.
std::vector<ProbResult> pnn_candidates(std::span<const UncertainInterval> objects, double q,
                                       const KernelConfig& cfg);
std::vector<ProbResult> pnn_candidates(std::span<const UncertainDisc> objects, Point2D q,
                                       const KernelConfig& cfg);

/// Most probable nearest neighbor; exact ties go to the smaller id.
/// Throws std::invalid_argument on an empty object set.
ProbResult top1_pnn(std::span<const UncertainInterval> objects, double q, const KernelConfig& cfg);
ProbResult top1_pnn(std::span<const UncertainDisc> objects, Point2D q, const KernelConfig& cfg);

/// Difference between the best and second-best probabilities at q (1 when a
/// single object has non-zero probability).
double top2_gap(std::span<const UncertainInterval> objects, double q, const KernelConfig& cfg);
double top2_gap(std::span<const UncertainDisc> objects, Point2D q, const KernelConfig& cfg);

/// Objects in non-decreasing mindist order from a fixed anchor, consumed one at a time.
template <class Object>
class MindistStream {
 public:
  virtual ~MindistStream() = default;
  /// Next object without consuming it; nullptr once exhausted.
  virtual const Object* peek() = 0;
  virtual void pop() = 0;
};

/// In-memory stream: sorts a copy of the objects by mindist from the anchor.
template <class Object, class Query>
class SortedMindistStream final : public MindistStream<Object> {
 public:
  SortedMindistStream(std::span<const Object> objects, Query anchor);
  const Object* peek() override { return pos_ < sorted_.size() ? &sorted_[pos_] : nullptr; }
  void pop() override { ++pos_; }

 private:
  std::vector<Object> sorted_;
  std::size_t pos_ = 0;
};

template <class Object>
struct TopKResult {
  std::vector<ProbResult> ranked;    // at most k, most probable first
  std::vector<Object> retrieved;     // everything pulled from the stream, in order
  bool truncated = false;            // stream held fewer than k objects
};

/// Top-k most probable nearest neighbors of q_s. Pulls objects until the next
/// mindist exceeds the k-th smallest maxdist seen so far, then keeps pulling the
/// objects that still overlap the candidates' distance ranges so that every
/// candidate probability is exact. Ranking: probability desc, mindist asc, id asc.
TopKResult<UncertainDisc> topk_pnn(MindistStream<UncertainDisc>& store, Point2D q_s, int k,
                                   const KernelConfig& cfg);
TopKResult<UncertainInterval> topk_pnn(MindistStream<UncertainInterval>& store, double q_s, int k,
                                       const KernelConfig& cfg);

struct McEstimate {
  double probability = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of the nearest-neighbor probability: each trial draws one
/// location per object and checks whether `id` is strictly the nearest.
McEstimate mc_oracle(std::span<const UncertainInterval> objects, ObjectId id, double q,
                     std::int64_t trials, std::uint64_t seed);
McEstimate mc_oracle(std::span<const UncertainDisc> objects, ObjectId id, Point2D q,
                     std::int64_t trials, std::uint64_t seed);

}  // namespace pvd
