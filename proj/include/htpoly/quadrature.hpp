#pragma once

#include "htpoly/geometry.hpp"

#include <functional>
#include <vector>

namespace htpoly {

/// Gauss-Legendre points/weights on [-1, 1]; weights sum to 2, exact for
/// polynomials of degree 2n-1.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exactDegree() const { return 2 * static_cast<int>(points.size()) - 1; }
};

SegmentRule gaussSegment(int n_points);  // 1 <= n_points <= 30

/// Symmetric cubature on the reference triangle in barycentric coordinates;
/// weights sum to 1 (area-normalized).
struct TriangleRule {
  struct Node {
    double l0, l1, l2;
    double weight;
  };
  std::vector<Node> nodes;
  int order = 0;
};

TriangleRule dunavantTriangle(int order);  // order in {1, ..., 8}

/// Integrate f over a convex CCW polygon by fan triangulation from the
/// centroid with the given triangle rule.
double integratePolygon(const std::vector<Point2>& vertices,
                        const std::function<double(const Point2&)>& f,
                        const TriangleRule& rule);

}  // namespace htpoly
