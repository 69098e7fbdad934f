#pragma once

#include "pvd/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvd {

enum class Distribution { Uniform, Zipf };

struct WorkloadSpec {
  int dim = 2;
  Distribution dist = Distribution::Uniform;
  double zipf_alpha = 1.0;
  int n = 1000;
  double extent = 10'000.0;
  double min_size = 5.0;   // square side (2D) or interval length (1D)
  double max_size = 30.0;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on n < 1, a non-positive extent or a bad size range.
  void validate() const;
};

/// Zipf cells per axis; objects are uniform within their cell.
inline constexpr int kZipfCells = 100;

/// Discs whose radius is half a square side drawn from the size range. Ids 1..n.
std::vector<UncertainDisc> gen_discs(const WorkloadSpec& spec);
/// Intervals with lengths drawn from the size range, fully inside [0, extent]. Ids 1..n.
std::vector<UncertainInterval> gen_intervals(const WorkloadSpec& spec);

/// P(cell c) proportional to 1 / (c+1)^alpha for c in [0, cells).
std::vector<double> zipf_weights(int cells, double alpha);

enum class TrajectoryKind { Random, Directional };

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Random;
  int steps = 1000;          // number of points
  double step_len = 5.0;
  double extent = 10'000.0;
  double jitter_deg = 5.0;   // directional heading noise
  std::uint64_t seed = 1;

  void validate() const;
};

/// Starts at a uniform point; headings bounce off the borders so every move has length step_len.
std::vector<Point2D> gen_trajectory(const TrajectorySpec& spec);
std::vector<double> gen_trajectory_1d(const TrajectorySpec& spec);

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Dataset {
  int dim = 2;
  std::vector<UncertainDisc> discs;
  std::vector<UncertainInterval> intervals;
};

void write_dataset(std::ostream& out, const Dataset& data);
/// An empty stream is an empty 2D dataset. Throws FormatError naming the offending line.
Dataset read_dataset(std::istream& in);
void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

struct TrajectoryFile {
  int dim = 2;
  std::vector<Point2D> points;
  std::vector<double> xs;
};

void write_trajectory(std::ostream& out, const TrajectoryFile& traj);
TrajectoryFile read_trajectory(std::istream& in);
void save_trajectory(const std::filesystem::path& path, const TrajectoryFile& traj);
TrajectoryFile load_trajectory(const std::filesystem::path& path);

}  // namespace pvd
