#pragma once

#include "pvd/kernel.hpp"
#include "pvd/spatial_index.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace pvd {

/// Convex polygon, counter-clockwise, without repeated closing vertex.
using Polygon = std::vector<Point2D>;

/// Keeps the part of `poly` where dot(x, normal) <= offset.
Polygon clip_halfplane(const Polygon& poly, Point2D normal, double offset);
bool polygon_contains(const Polygon& poly, Point2D q);
Mbr polygon_mbr(const Polygon& poly);
double polygon_area(const Polygon& poly);

struct VoronoiEdge {
  ObjectId i = 0;
  ObjectId j = 0;
  Segment2D seg;
};

struct VoronoiCell {
  ObjectId id = 0;
  Polygon poly;
  std::vector<ObjectId> neighbors;
};

/// Voronoi edges of the disc centers clipped to `space`. Centers must be distinct.
std::vector<VoronoiEdge> center_voronoi(std::span<const UncertainDisc> objects, const Mbr& space);
/// Cells in input order, with their Voronoi neighbors.
std::vector<VoronoiCell> center_voronoi_cells(std::span<const UncertainDisc> objects, const Mbr& space);

/// Signed distance of x from the perpendicular bisector of (c_i, c_j), positive toward c_j.
double pair_offset(Point2D ci, Point2D cj, Point2D x);

struct Pbr {
  ObjectId i = 0;
  ObjectId j = 0;
  VoronoiEdge edge;
  double lval = 0.0;  // <= 0, toward c_i
  double hval = 0.0;  // >= 0, toward c_j
  std::array<Point2D, 4> quad{};
  bool flagged = false;  // a search hit its limit; the band was widened
  Point2D ci, cj;

  double offset(Point2D x) const { return pair_offset(ci, cj, x); }
  /// Offset test only; the caller restricts x to the cells of i and j.
  bool strip_contains(Point2D x) const {
    const double t = offset(x);
    return lval - 1e-9 <= t && t <= hval + 1e-9;
  }
};

struct PbrBounds {
  double lval = 0.0;
  double hval = 0.0;
  bool flagged = false;
};

/// Equality point of the isolated pair on the line c_i c_j, searched from the edge.
/// Returns the offsets of the edge and that point as (min, max). Equal radii give (0, 0).
/// Throws std::runtime_error when the search leaves the segment between the centers.
PbrBounds init_pbr_bound(const UncertainDisc& oi, const UncertainDisc& oj, const VoronoiEdge& edge,
                         const KernelConfig& cfg);

/// Parts of the edge where some third object can hold non-zero probability, i.e. where
/// dist(s,c_k) - r_k < dist(s,c_small) + r_small.
std::vector<Segment2D> find_influenced_part(const UncertainDisc& oi, const UncertainDisc& oj,
                                            const VoronoiEdge& edge,
                                            std::span<const UncertainDisc> objects);

/// Widens the bounds with the pairwise equality points found on the perpendicular to the
/// edge at both ends and the middle of `segment`, under the full object set.
PbrBounds update_pbr_bound(PbrBounds bounds, const Segment2D& segment, const UncertainDisc& oi,
                           const UncertainDisc& oj, std::span<const UncertainDisc> objects,
                           const KernelConfig& cfg);

/// Band for the Voronoi edge of (oi, oj); `objects` are those that can matter near it.
Pbr prob_bisector_2d(const UncertainDisc& oi, const UncertainDisc& oj, const VoronoiEdge& edge,
                     std::span<const UncertainDisc> objects, const KernelConfig& cfg);

struct Pvd2D {
  Mbr space;
  std::vector<UncertainDisc> sites;      // objects that own a cell, after coincident-center pruning
  std::vector<UncertainDisc> objects;    // every input object, for probability evaluation
  std::vector<Polygon> cells;            // Voronoi cell per site
  std::vector<Polygon> pvcs;             // PVC per site (possibly empty)
  std::vector<Mbr> mbrs;                 // MBR of the Voronoi cell per site
  std::vector<std::vector<ObjectId>> hidden;  // larger concentric discs pruned behind each site
  std::vector<std::vector<std::size_t>> site_pbrs;  // PBR indices per site
  std::vector<Pbr> pbrs;
  std::unordered_map<ObjectId, std::size_t> site_index;
  MbrIndex center_index;                 // site centers

  std::size_t nearest_site(Point2D q) const;
};

/// Coincident centers keep only the smallest disc (ties: smallest id). A larger concentric
/// disc can still win near a third object, so prob_voronoi_2d leaves such sites without a PVC.
std::vector<UncertainDisc> prune_coincident(std::span<const UncertainDisc> objects);

Pvd2D prob_voronoi_2d(std::span<const UncertainDisc> objects, const Mbr& space, const KernelConfig& cfg);

struct Location2D {
  enum class Kind { Cell, Pbr, MultiPbr };
  Kind kind = Kind::Cell;
  std::vector<ObjectId> owners;  // one for Cell, two for Pbr, two or more for MultiPbr
};

/// Throws std::out_of_range when q is outside the data space.
Location2D locate_2d(const Pvd2D& pvd, Point2D q);
/// Classification of q inside the Voronoi cell of `site` (no nearest-site search).
Location2D locate_in_cell(const Pvd2D& pvd, std::size_t site, Point2D q);

/// `pvc <id> <x> <y> ...` and `pbr <i> <j> <lval> <hval> <4 corners>` lines.
void write_pvd_2d(std::ostream& out, const Pvd2D& pvd);

}  // namespace pvd
