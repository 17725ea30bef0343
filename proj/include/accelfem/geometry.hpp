#pragma once

#include "accelfem/types.hpp"

#include <Eigen/Core>

#include <array>
#include <variant>
#include <vector>

namespace afem {

/// Axis-aligned box [lo, hi] in R^d.
struct Box {
  Point lo;
  Point hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  double measure() const;
  bool contains(const Point& x, double tol = 1e-14) const;
};

/// Planar triangle; vertices are kept counter-clockwise.
struct Triangle {
  std::array<Eigen::Vector2d, 3> v;

  double signed_area() const;
  bool contains(const Point& x, double tol = 1e-14) const;
};

/// Element cell: boxes in any dimension, triangles in the plane.
using Cell = std::variant<Box, Triangle>;

int cell_dimension(const Cell& c);
double cell_measure(const Cell& c);
bool cell_contains(const Cell& c, const Point& x, double tol = 1e-14);
Cell translate(const Cell& c, const Point& offset);
Cell reflect(const Cell& c);
Box bounding_box(const Cell& c);
/// Points sampled on the cell boundary (faces or edges), used for continuity checks.
std::vector<Point> boundary_samples(const Cell& c, int per_face);

/// Integration region produced by intersecting two cells.
struct Region {
  std::vector<Box> boxes;
  std::vector<Triangle> triangles;

  double measure() const;
  bool empty() const { return boxes.empty() && triangles.empty(); }
};

/// Intersection of two cells. Boxes meet boxes analytically; in the plane any
/// pairing involving a triangle is clipped as convex polygons and the result
/// fan-triangulated. Pieces of zero measure are dropped.
/// Throws GeometryError if a fan triangle comes out with negative orientation.
Region intersect(const Cell& a, const Cell& b);

/// Convex polygon clipping (Sutherland-Hodgman against each edge of a convex,
/// counter-clockwise clip polygon).
std::vector<Eigen::Vector2d> clip_convex(const std::vector<Eigen::Vector2d>& subject,
                                         const std::vector<Eigen::Vector2d>& clip);

}  // namespace afem
