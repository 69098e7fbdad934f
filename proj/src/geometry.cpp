#include "pvd/geometry.hpp"

#include <algorithm>

namespace pvd {

void validate(const UncertainInterval& o) {
  if (!std::isfinite(o.lower) || !std::isfinite(o.upper) || !(o.lower < o.upper)) {
    throw std::invalid_argument("interval " + std::to_string(o.id) + " needs finite lower < upper");
  }
}

void validate(const UncertainDisc& o) {
  if (!std::isfinite(o.center.x) || !std::isfinite(o.center.y) || !std::isfinite(o.radius) ||
      !(o.radius > 0.0)) {
    throw std::invalid_argument("disc " + std::to_string(o.id) + " needs a finite center and radius > 0");
  }
}

double mindist(Point2D q, const UncertainDisc& o) {
  return std::max(0.0, dist(q, o.center) - o.radius);
}

double maxdist(Point2D q, const UncertainDisc& o) { return dist(q, o.center) + o.radius; }

double mindist(double q, const UncertainInterval& o) {
  if (q < o.lower) return o.lower - q;
  if (q > o.upper) return q - o.upper;
  return 0.0;
}

double maxdist(double q, const UncertainInterval& o) {
  return std::max(std::abs(q - o.lower), std::abs(q - o.upper));
}

double point_segment_distance(Point2D p, const Segment2D& s) {
  const Point2D d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return dist(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return dist(p, s.at(t));
}

double circle_intersection_area(double r0, double r1, double d) {
  if (r0 <= 0.0 || r1 <= 0.0) return 0.0;
  if (d >= r0 + r1) return 0.0;
  const double rmin = std::min(r0, r1);
  if (d <= std::abs(r0 - r1)) return std::numbers::pi * rmin * rmin;

  // Two circular segments; acos arguments clamped so tangency never yields NaN.
  const double c0 = std::clamp((d * d + r0 * r0 - r1 * r1) / (2.0 * d * r0), -1.0, 1.0);
  const double c1 = std::clamp((d * d + r1 * r1 - r0 * r0) / (2.0 * d * r1), -1.0, 1.0);
  const double k = (-d + r0 + r1) * (d + r0 - r1) * (d - r0 + r1) * (d + r0 + r1);
  const double area = r0 * r0 * std::acos(c0) + r1 * r1 * std::acos(c1) - 0.5 * std::sqrt(std::max(0.0, k));
  return std::clamp(area, 0.0, std::numbers::pi * rmin * rmin);
}

double lens_area(Point2D q, double d, const UncertainDisc& o) {
  if (d <= 0.0) return 0.0;
  const double cd = dist(q, o.center);
  if (d >= cd + o.radius) return o.area();
  return circle_intersection_area(d, o.radius, cd);
}

double covered_length(double q, double d, const UncertainInterval& o) {
  if (d <= 0.0) return 0.0;
  const double lo = std::max(q - d, o.lower);
  const double hi = std::min(q + d, o.upper);
  return std::max(0.0, hi - lo);
}

PairClass classify_pair(const UncertainInterval& a, const UncertainInterval& b) {
  return {std::abs(a.length() - b.length()) <= kLengthTolerance,
          a.lower <= b.upper && b.lower <= a.upper};
}

PairClass classify_pair(const UncertainDisc& a, const UncertainDisc& b) {
  return {std::abs(a.radius - b.radius) <= kLengthTolerance,
          dist(a.center, b.center) <= a.radius + b.radius};
}

}  // namespace pvd
