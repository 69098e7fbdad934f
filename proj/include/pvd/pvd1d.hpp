#pragma once

#include "pvd/kernel.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pvd {

struct Bisector1D {
  double position = 0.0;
  ObjectId left = 0;   // more probable just left of position
  ObjectId right = 0;  // more probable just right of position
};

struct Extent1D {
  double lo = 0.0;
  double hi = 0.0;
};

/// Probabilistic Voronoi diagram of intervals. cells[0] covers [extent.lo, bisectors[0]),
/// cells[k] covers [bisectors[k-1], bisectors[k]), the last cell ends at extent.hi.
struct Pvd1D {
  std::vector<Bisector1D> bisectors;
  std::vector<ObjectId> cells;
  Extent1D extent;
};

/// Raised when the stride search finds no ranking swap inside the pair's range.
class NoBisectorFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-form bisector positions for an isolated pair. std::nullopt when no closed
/// form applies; an empty list for identical intervals, which have no bisector.
std::optional<std::vector<double>> bisector_by_lemma(const UncertainInterval& a,
                                                     const UncertainInterval& b);

/// True when some third object can change the pair's probabilities near x: it overlaps
/// the open span of the pair, or lies closer to x than the pair's larger maxdist.
bool third_object_interferes(const UncertainInterval& a, const UncertainInterval& b, double x,
                             std::span<const UncertainInterval> objects);

/// Seed positions for the search, one or two.
std::vector<double> initial_bisector(const UncertainInterval& a, const UncertainInterval& b);

/// Equal-probability position of the pair near ipb under the full object set.
/// Throws NoBisectorFound when no swap exists where either object can win.
double find_prob_bisector_1d(const UncertainInterval& a, const UncertainInterval& b, double ipb,
                             std::span<const UncertainInterval> objects, const KernelConfig& cfg);

/// All bisectors of the pair (0 to 2). Seeds whose search finds no swap are dropped.
std::vector<Bisector1D> prob_bisector_1d(const UncertainInterval& a, const UncertainInterval& b,
                                         std::span<const UncertainInterval> objects,
                                         const KernelConfig& cfg);

/// Objects whose lower bound is at least as close to pb as o_i's lower bound.
std::vector<UncertainInterval> candidate_objects(std::span<const UncertainInterval> sorted,
                                                 const UncertainInterval& oi, double pb);

/// Sweeps candidate bisectors left to right, keeping each whose left object is the
/// current winner.
Pvd1D assemble_pvd_1d(std::vector<Bisector1D> candidates, std::span<const UncertainInterval> objects,
                      Extent1D extent, const KernelConfig& cfg);

Pvd1D prob_voronoi_1d(std::span<const UncertainInterval> objects, Extent1D extent,
                      const KernelConfig& cfg);

/// Winner of the cell holding q. A q on a bisector belongs to the cell starting there.
/// Throws std::out_of_range outside the extent.
ObjectId locate_1d(const Pvd1D& pvd, double q);

/// Objects sorted by lower bound with identical intervals collapsed to the smallest id.
std::vector<UncertainInterval> sorted_unique(std::span<const UncertainInterval> objects);

/// One `bisector <x> <left_id> <right_id>` line per bisector.
void write_pvd_1d(std::ostream& out, const Pvd1D& pvd);

}  // namespace pvd
