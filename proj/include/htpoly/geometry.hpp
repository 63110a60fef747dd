#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace htpoly {

using Point2 = Eigen::Vector2d;

/// Shoelace area of a simple polygon (positive for CCW).
double polygonArea(const std::vector<Point2>& vertices);

/// Shoelace centroid and area. Throws std::invalid_argument for < 3 vertices.
std::pair<Point2, double> polygonCentroidArea(const std::vector<Point2>& vertices);

double polygonDiameter(const std::vector<Point2>& vertices);

/// Cross products of consecutive edge vectors all >= -eps, eps relative to
/// the cell diameter.
bool polygonIsConvexCcw(const std::vector<Point2>& vertices,
                        double eps_rel = 1e-12);

bool pointInConvexPolygon(const std::vector<Point2>& vertices, const Point2& p);

/// One straight or circular piece of a domain boundary. Arcs are CCW from
/// angle0 to angle1 about the center; `domain_outside` marks holes (the
/// domain lies on the far side of the circle).
struct BoundaryFeature {
  enum class Kind { segment, arc };
  Kind kind = Kind::segment;
  std::string marker;
  // segment
  Point2 a = Point2::Zero();
  Point2 b = Point2::Zero();
  // arc
  Point2 center = Point2::Zero();
  double radius = 0.0;
  double angle0 = 0.0;
  double angle1 = 0.0;
  bool domain_outside = false;

  double distanceTo(const Point2& p) const;
};

/// Benchmark domains: a rectangle, a quarter plate with a circular hole at
/// the origin corner, and a quarter annulus in the first quadrant.
class DomainShape {
 public:
  enum class Kind { rectangle, quarter_plate_with_hole, quarter_annulus };

  static DomainShape rectangle(double length, double height);
  static DomainShape quarterPlateWithHole(double side, double hole_radius);
  static DomainShape quarterAnnulus(double r_inner, double r_outer);

  Kind kind() const { return kind_; }
  double area() const { return area_; }
  double diameter() const { return diameter_; }

  /// Negative inside, positive outside.
  double signedDistance(const Point2& p) const;
  bool contains(const Point2& p) const { return signedDistance(p) < 0.0; }

  /// Convex polygon from which Voronoi cells are clipped. Straight boundary
  /// features lie exactly on its edges; arcs are handled by seed mirroring.
  const std::vector<Point2>& clipPolygon() const { return clip_polygon_; }

  const std::vector<BoundaryFeature>& features() const { return features_; }

  /// Index of the boundary feature nearest to p.
  int nearestFeature(const Point2& p) const;

  double param(int i) const { return params_[i]; }

 private:
  Kind kind_ = Kind::rectangle;
  double params_[2] = {0, 0};
  double area_ = 0;
  double diameter_ = 0;
  std::vector<Point2> clip_polygon_;
  std::vector<BoundaryFeature> features_;
};

struct SeedSet {
  std::vector<Point2> points;
};

/// Deterministic rejection-sampled seeds strictly inside the domain.
SeedSet randomSeeds(const DomainShape& domain, int count, std::uint64_t rng_seed);

struct PolygonMesh {
  std::vector<Point2> nodes;
  std::vector<std::vector<int>> cells;  // CCW node indices, length >= 3
  struct BoundaryEdge {
    int a = -1;
    int b = -1;
    std::string marker;
  };
  std::vector<BoundaryEdge> boundary_edges;

  int nodeCount() const { return static_cast<int>(nodes.size()); }
  int cellCount() const { return static_cast<int>(cells.size()); }
  std::vector<Point2> cellVertices(int cell) const;
  double cellArea(int cell) const;
  double totalArea() const;

  /// Structural validation: convex CCW cells, valid indices, no duplicate
  /// nodes, each boundary edge owned by exactly one cell. Throws
  /// std::runtime_error with a description on failure.
  void validate() const;
};

}  // namespace htpoly
