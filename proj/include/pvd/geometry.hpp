#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace pvd {

using ObjectId = std::int64_t;

// Radii and lengths closer than this are treated as equal.
inline constexpr double kLengthTolerance = 1e-9;

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2D operator*(double s, Point2D p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2D a, Point2D b) = default;
};

inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2D a, Point2D b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2D p) { return std::hypot(p.x, p.y); }
inline double dist(Point2D a, Point2D b) { return norm(a - b); }

/// Uncertain 1D object: uniform pdf over the closed range [lower, upper].
struct UncertainInterval {
  ObjectId id = 0;
  double lower = 0.0;
  double upper = 0.0;

  double mid() const { return 0.5 * (lower + upper); }
  double length() const { return upper - lower; }

  friend bool operator==(const UncertainInterval&, const UncertainInterval&) = default;
};

/// Uncertain 2D object: uniform pdf over the disc (center, radius).
struct UncertainDisc {
  ObjectId id = 0;
  Point2D center;
  double radius = 0.0;

  double area() const { return std::numbers::pi * radius * radius; }
  double pdf() const { return 1.0 / area(); }

  friend bool operator==(const UncertainDisc&, const UncertainDisc&) = default;
};

/// Throws std::invalid_argument unless lower < upper and both are finite.
void validate(const UncertainInterval& o);
/// Throws std::invalid_argument unless radius > 0 and the center is finite.
void validate(const UncertainDisc& o);

struct Mbr {
  Point2D lo;
  Point2D hi;

  static Mbr of_point(Point2D p) { return {p, p}; }
  static Mbr of(const UncertainDisc& o) {
    return {{o.center.x - o.radius, o.center.y - o.radius},
            {o.center.x + o.radius, o.center.y + o.radius}};
  }
  // 1D objects live on the x axis.
  static Mbr of(const UncertainInterval& o) { return {{o.lower, 0.0}, {o.upper, 0.0}}; }
  static Mbr centered(Point2D c, double side) {
    const double h = 0.5 * side;
    return {{c.x - h, c.y - h}, {c.x + h, c.y + h}};
  }

  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  bool intersects(const Mbr& o) const {
    return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
  }
  bool contains(Point2D p) const { return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y; }
  bool contains(const Mbr& o) const { return contains(o.lo) && contains(o.hi); }
  Mbr merged(const Mbr& o) const {
    return {{std::fmin(lo.x, o.lo.x), std::fmin(lo.y, o.lo.y)},
            {std::fmax(hi.x, o.hi.x), std::fmax(hi.y, o.hi.y)}};
  }
  Mbr inflated(double margin) const {
    return {{lo.x - margin, lo.y - margin}, {hi.x + margin, hi.y + margin}};
  }
  Point2D center() const { return 0.5 * (lo + hi); }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }

  /// Minimum distance from p to the rectangle (0 inside).
  double mindist(Point2D p) const {
    const double dx = std::fmax(0.0, std::fmax(lo.x - p.x, p.x - hi.x));
    const double dy = std::fmax(0.0, std::fmax(lo.y - p.y, p.y - hi.y));
    return std::hypot(dx, dy);
  }

  friend bool operator==(const Mbr&, const Mbr&) = default;
};

struct Segment2D {
  Point2D a;
  Point2D b;

  double length() const { return dist(a, b); }
  Point2D at(double t) const { return a + t * (b - a); }
  Point2D midpoint() const { return at(0.5); }
};

double mindist(Point2D q, const UncertainDisc& o);
double maxdist(Point2D q, const UncertainDisc& o);
double mindist(double q, const UncertainInterval& o);
double maxdist(double q, const UncertainInterval& o);

/// Distance from p to the closest point of segment s.
double point_segment_distance(Point2D p, const Segment2D& s);

/// Area of disc(q, d) intersected with the object's disc, in closed form.
double lens_area(Point2D q, double d, const UncertainDisc& o);

/// Area of the intersection of two discs (r0, r1 >= 0) whose centers are
/// `center_distance` apart.
double circle_intersection_area(double r0, double r1, double center_distance);

/// Length of [q - d, q + d] intersected with the interval; the 1D analog of lens_area.
double covered_length(double q, double d, const UncertainInterval& o);

struct PairClass {
  bool equi_range = false;
  bool overlapping = false;
};

PairClass classify_pair(const UncertainInterval& a, const UncertainInterval& b);
PairClass classify_pair(const UncertainDisc& a, const UncertainDisc& b);

}  // namespace pvd
