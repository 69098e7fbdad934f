#pragma once

#include "pvd/pvd2d.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pvd {

struct RunMetrics {
  double time_s = 0.0;
  std::uint64_t io = 0;              // server index node accesses
  std::uint64_t communications = 0;  // client-server round trips
};

enum class Resolution {
  Server,           // naive: answered by the server
  Cell,             // inside a PVC
  PbrResolved,      // inside one or more bands, settled by a server top-1
  SafeContainment,
  SafeLowerBound,
  Refreshed,        // known region rebuilt at this step
};

std::string_view to_string(Resolution r);

struct StepResult {
  Point2D position;
  ObjectId winner = 0;
  Resolution resolution = Resolution::Server;
};

struct RunResult {
  std::vector<StepResult> steps;
  RunMetrics metrics;
};

/// Server side of the session: the object set and its R-tree.
class ObjectServer {
 public:
  explicit ObjectServer(std::vector<UncertainDisc> objects,
                        std::size_t capacity = MbrIndex::kDefaultCapacity);

  const std::vector<UncertainDisc>& objects() const { return objects_; }
  const MbrIndex& index() const { return index_; }
  const UncertainDisc& object(ObjectId id) const { return objects_[position_.at(id)]; }

  /// Most probable nearest neighbor of q over the whole set; reads only the objects the
  /// index cannot rule out.
  ProbResult top1(Point2D q, const KernelConfig& cfg, IoCounter& io) const;
  /// Objects in non-decreasing exact mindist from q.
  IndexMindistStream<UncertainDisc, Point2D> stream(Point2D q, IoCounter& io) const;

 private:
  std::vector<UncertainDisc> objects_;
  std::unordered_map<ObjectId, std::size_t> position_;
  MbrIndex index_;
};

RunResult naive_pmnn(std::span<const Point2D> traj, const ObjectServer& server, const KernelConfig& cfg);

/// Server side for P-PVD: the diagram and an index over the Voronoi-cell MBRs.
class PvdServer {
 public:
  PvdServer(std::vector<UncertainDisc> objects, const Mbr& space, const KernelConfig& cfg);

  const ObjectServer& objects() const { return objects_; }
  const Pvd2D& pvd() const { return pvd_; }
  const MbrIndex& cell_index() const { return cell_index_; }

 private:
  ObjectServer objects_;
  Pvd2D pvd_;
  MbrIndex cell_index_;
};

/// Client keeps the cells whose MBR meets the buffer window (side `buffer_window`, centered at
/// the request point; 0 fetches only cells whose MBR contains it).
RunResult ppvd_pmnn(std::span<const Point2D> traj, const PvdServer& server, double buffer_window,
                    const KernelConfig& cfg);

struct KnownRegion {
  Point2D anchor;
  double radius = 0.0;                // max maxdist over the top-k; +inf when flagged
  std::vector<ProbResult> top;        // the top-k most probable nearest neighbors at the anchor
  std::vector<UncertainDisc> objects; // every object with mindist from the anchor below radius
  bool flagged = false;               // fewer than k objects exist: the region holds all of them
};

/// Throws std::invalid_argument when k < 1.
KnownRegion build_known_region(const ObjectServer& server, Point2D q_s, int k, const KernelConfig& cfg,
                               IoCounter& io);

/// dist(q, c_i) + r_i <= r - dist(q, q_s).
bool safe_containment(Point2D q, const UncertainDisc& o, const KnownRegion& region);

/// Pessimistic check against a virtual point object o_v at distance r - dist(q, q_s) from q:
/// o_i must beat o_v and every known object, with o_v placed at that distance or any farther.
/// False outside the region.
bool safe_lower_bound(Point2D q, const UncertainDisc& o, const KnownRegion& region, const KernelConfig& cfg);

/// Throws std::invalid_argument when k < 1 or the server holds no objects.
RunResult ipvd_pmnn(std::span<const Point2D> traj, const ObjectServer& server, int k, const KernelConfig& cfg);

}  // namespace pvd
