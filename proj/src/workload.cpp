#include "pvd/workload.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace pvd {

void WorkloadSpec::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(extent > 0.0)) throw std::invalid_argument("extent must be positive");
  if (!(min_size > 0.0) || min_size > max_size || max_size >= extent) {
    throw std::invalid_argument("size range must satisfy 0 < min <= max < extent");
  }
  if (dist == Distribution::Zipf && !(zipf_alpha >= 0.0)) throw std::invalid_argument("zipf alpha must be >= 0");
}

void TrajectorySpec::validate() const {
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  if (!(step_len > 0.0) || step_len >= extent) throw std::invalid_argument("step length must be in (0, extent)");
  if (!(jitter_deg >= 0.0)) throw std::invalid_argument("jitter must be non-negative");
}

std::vector<double> zipf_weights(int cells, double alpha) {
  std::vector<double> w(static_cast<std::size_t>(cells));
  for (int c = 0; c < cells; ++c) w[static_cast<std::size_t>(c)] = 1.0 / std::pow(c + 1.0, alpha);
  return w;
}

namespace {

// Coordinate sampler over [lo, hi]: uniform, or a Zipf-chosen cell then uniform inside it.
class CoordinateSampler {
 public:
  CoordinateSampler(const WorkloadSpec& spec, double lo, double hi)
      : lo_(lo), hi_(hi), zipf_(spec.dist == Distribution::Zipf) {
    if (zipf_) {
      const auto w = zipf_weights(kZipfCells, spec.zipf_alpha);
      cells_ = std::discrete_distribution<int>(w.begin(), w.end());
    }
  }

  double operator()(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (!zipf_) return lo_ + u(rng) * (hi_ - lo_);
    const double width = (hi_ - lo_) / kZipfCells;
    return lo_ + (cells_(rng) + u(rng)) * width;
  }

 private:
  double lo_, hi_;
  bool zipf_;
  std::discrete_distribution<int> cells_;
};

}  // namespace

std::vector<UncertainDisc> gen_discs(const WorkloadSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> side(spec.min_size, spec.max_size);
  CoordinateSampler coord(spec, 0.0, spec.extent);
  std::vector<UncertainDisc> out;
  out.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    const double r = 0.5 * side(rng);
    const double x = coord(rng);
    const double y = coord(rng);
    out.push_back({i + 1, {x, y}, r});
  }
  return out;
}

std::vector<UncertainInterval> gen_intervals(const WorkloadSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> len(spec.min_size, spec.max_size);
  CoordinateSampler coord(spec, 0.0, spec.extent);
  std::vector<UncertainInterval> out;
  out.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    const double l = len(rng);
    // The sampled coordinate is the midpoint, pulled inward so the interval fits.
    const double mid = std::clamp(coord(rng), 0.5 * l, spec.extent - 0.5 * l);
    out.push_back({i + 1, mid - 0.5 * l, mid + 0.5 * l});
  }
  return out;
}

std::vector<Point2D> gen_trajectory(const TrajectorySpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(0.0, spec.extent);
  std::uniform_real_distribution<double> turn(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, spec.jitter_deg * std::numbers::pi / 180.0);

  std::vector<Point2D> out{{u(rng), u(rng)}};
  double heading = turn(rng);
  for (int s = 1; s < spec.steps; ++s) {
    if (spec.kind == TrajectoryKind::Random) {
      heading = turn(rng);
    } else if (spec.jitter_deg > 0.0) {
      heading += jitter(rng);
    }
    Point2D dir{std::cos(heading), std::sin(heading)};
    const Point2D p = out.back();
    // Mirror the heading off any border the step would cross.
    const Point2D probe = p + spec.step_len * dir;
    if (probe.x < 0.0 || probe.x > spec.extent) dir.x = -dir.x;
    if (probe.y < 0.0 || probe.y > spec.extent) dir.y = -dir.y;
    heading = std::atan2(dir.y, dir.x);
    const Point2D next = p + spec.step_len * dir;
    out.push_back({std::clamp(next.x, 0.0, spec.extent), std::clamp(next.y, 0.0, spec.extent)});
  }
  return out;
}

std::vector<double> gen_trajectory_1d(const TrajectorySpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(0.0, spec.extent);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> out{u(rng)};
  double dir = coin(rng) ? 1.0 : -1.0;
  for (int s = 1; s < spec.steps; ++s) {
    if (spec.kind == TrajectoryKind::Random) dir = coin(rng) ? 1.0 : -1.0;
    const double x = out.back();
    if (x + dir * spec.step_len < 0.0 || x + dir * spec.step_len > spec.extent) dir = -dir;
    out.push_back(x + dir * spec.step_len);
  }
  return out;
}

FormatError::FormatError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

constexpr const char* kDatasetHeader = "# pvd-dataset v1 dim=";

void put(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

template <class T>
T parse_field(std::string_view text, std::size_t line) {
  T value{};
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw FormatError(line, "cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

// Reads the header and returns its dimension, or 0 for an empty stream.
int read_header(std::istream& in, const char* prefix, std::size_t& line_no) {
  std::string line;
  if (!std::getline(in, line)) return 0;
  line_no = 1;
  const std::string_view p(prefix);
  if (line.rfind(p, 0) != 0) throw FormatError(1, "missing header '" + std::string(p) + "<1|2>'");
  const std::string dim = line.substr(p.size());
  if (dim != "1" && dim != "2") throw FormatError(1, "dimension must be 1 or 2");
  return dim == "1" ? 1 : 2;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

constexpr const char* kTrajectoryHeader = "# pvd-trajectory v1 dim=";

}  // namespace

void write_dataset(std::ostream& out, const Dataset& data) {
  out << kDatasetHeader << data.dim << '\n';
  if (data.dim == 2) {
    for (const auto& o : data.discs) {
      out << o.id << ',';
      put(out, o.center.x);
      out << ',';
      put(out, o.center.y);
      out << ',';
      put(out, o.radius);
      out << '\n';
    }
  } else {
    for (const auto& o : data.intervals) {
      out << o.id << ',';
      put(out, o.lower);
      out << ',';
      put(out, o.upper);
      out << '\n';
    }
  }
}

Dataset read_dataset(std::istream& in) {
  Dataset data;
  std::size_t line_no = 0;
  const int dim = read_header(in, kDatasetHeader, line_no);
  if (dim == 0) return data;
  data.dim = dim;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    try {
      if (dim == 2) {
        if (f.size() != 4) throw FormatError(line_no, "expected id,cx,cy,r");
        UncertainDisc o{parse_field<ObjectId>(f[0], line_no),
                        {parse_field<double>(f[1], line_no), parse_field<double>(f[2], line_no)},
                        parse_field<double>(f[3], line_no)};
        validate(o);
        data.discs.push_back(o);
      } else {
        if (f.size() != 3) throw FormatError(line_no, "expected id,l,u");
        UncertainInterval o{parse_field<ObjectId>(f[0], line_no), parse_field<double>(f[1], line_no),
                            parse_field<double>(f[2], line_no)};
        validate(o);
        data.intervals.push_back(o);
      }
    } catch (const std::invalid_argument& e) {
      throw FormatError(line_no, e.what());
    }
  }
  return data;
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  auto out = open_out(path);
  write_dataset(out, data);
}

Dataset load_dataset(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_dataset(in);
}

void write_trajectory(std::ostream& out, const TrajectoryFile& traj) {
  out << kTrajectoryHeader << traj.dim << '\n';
  if (traj.dim == 2) {
    for (const Point2D& p : traj.points) {
      put(out, p.x);
      out << ',';
      put(out, p.y);
      out << '\n';
    }
  } else {
    for (double x : traj.xs) {
      put(out, x);
      out << '\n';
    }
  }
}

TrajectoryFile read_trajectory(std::istream& in) {
  TrajectoryFile traj;
  std::size_t line_no = 0;
  const int dim = read_header(in, kTrajectoryHeader, line_no);
  if (dim == 0) return traj;
  traj.dim = dim;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != static_cast<std::size_t>(dim)) throw FormatError(line_no, dim == 2 ? "expected x,y" : "expected x");
    if (dim == 2) {
      traj.points.push_back({parse_field<double>(f[0], line_no), parse_field<double>(f[1], line_no)});
    } else {
      traj.xs.push_back(parse_field<double>(f[0], line_no));
    }
  }
  return traj;
}

void save_trajectory(const std::filesystem::path& path, const TrajectoryFile& traj) {
  auto out = open_out(path);
  write_trajectory(out, traj);
}

TrajectoryFile load_trajectory(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_trajectory(in);
}

}  // namespace pvd
