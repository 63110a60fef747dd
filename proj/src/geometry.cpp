#include "htpoly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace htpoly {

namespace {
double cross2(const Point2& u, const Point2& v) { return u.x() * v.y() - u.y() * v.x(); }
}  // namespace

double polygonArea(const std::vector<Point2>& vertices) {
  const int n = static_cast<int>(vertices.size());
  double a = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point2& p = vertices[i];
    const Point2& q = vertices[(i + 1) % n];
    a += cross2(p, q);
  }
  return 0.5 * a;
}

std::pair<Point2, double> polygonCentroidArea(const std::vector<Point2>& vertices) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) throw std::invalid_argument("polygonCentroidArea: need at least 3 vertices");
  double a = 0.0;
  Point2 c = Point2::Zero();
  for (int i = 0; i < n; ++i) {
    const Point2& p = vertices[i];
    const Point2& q = vertices[(i + 1) % n];
    const double w = cross2(p, q);
    a += w;
    c += w * (p + q);
  }
  a *= 0.5;
  if (a == 0.0) throw std::invalid_argument("polygonCentroidArea: zero-area polygon");
  c /= (6.0 * a);
  return {c, a};
}

double polygonDiameter(const std::vector<Point2>& vertices) {
  double d2 = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i)
    for (size_t j = i + 1; j < vertices.size(); ++j)
      d2 = std::max(d2, (vertices[i] - vertices[j]).squaredNorm());
  return std::sqrt(d2);
}

bool polygonIsConvexCcw(const std::vector<Point2>& vertices, double eps_rel) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) return false;
  const double diam = polygonDiameter(vertices);
  const double eps = eps_rel * diam * diam;
  for (int i = 0; i < n; ++i) {
    const Point2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Point2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (cross2(e0, e1) < -eps) return false;
  }
  return polygonArea(vertices) > 0.0;
}

bool pointInConvexPolygon(const std::vector<Point2>& vertices, const Point2& p) {
  const int n = static_cast<int>(vertices.size());
  const double tol = 1e-12 * polygonDiameter(vertices);
  for (int i = 0; i < n; ++i) {
    const Point2 e = vertices[(i + 1) % n] - vertices[i];
    if (cross2(e, p - vertices[i]) < -tol * e.norm()) return false;
  }
  return true;
}

double BoundaryFeature::distanceTo(const Point2& p) const {
  if (kind == Kind::segment) {
    const Point2 d = b - a;
    const double len2 = d.squaredNorm();
    double t = len2 > 0 ? (p - a).dot(d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * d)).norm();
  }
  const Point2 r = p - center;
  double ang = std::atan2(r.y(), r.x());
  double a0 = angle0, a1 = angle1;
  while (ang < a0) ang += 2.0 * M_PI;
  if (ang <= a1) return std::abs(r.norm() - radius);
  // off the arc's angular range: distance to nearer endpoint
  const Point2 e0 = center + radius * Point2(std::cos(a0), std::sin(a0));
  const Point2 e1 = center + radius * Point2(std::cos(a1), std::sin(a1));
  return std::min((p - e0).norm(), (p - e1).norm());
}

DomainShape DomainShape::rectangle(double length, double height) {
  if (!(length > 0) || !(height > 0))
    throw std::invalid_argument("rectangle: non-positive dimensions");
  DomainShape d;
  d.kind_ = Kind::rectangle;
  d.params_[0] = length;
  d.params_[1] = height;
  d.area_ = length * height;
  d.diameter_ = std::hypot(length, height);
  const double y0 = -0.5 * height, y1 = 0.5 * height;
  d.clip_polygon_ = {{0, y0}, {length, y0}, {length, y1}, {0, y1}};
  d.features_ = {
      {BoundaryFeature::Kind::segment, "bottom", {0, y0}, {length, y0}},
      {BoundaryFeature::Kind::segment, "right", {length, y0}, {length, y1}},
      {BoundaryFeature::Kind::segment, "top", {length, y1}, {0, y1}},
      {BoundaryFeature::Kind::segment, "left", {0, y1}, {0, y0}},
  };
  return d;
}

DomainShape DomainShape::quarterPlateWithHole(double side, double hole_radius) {
  if (!(side > 0) || !(hole_radius > 0) || hole_radius >= side)
    throw std::invalid_argument("quarterPlateWithHole: invalid dimensions");
  DomainShape d;
  d.kind_ = Kind::quarter_plate_with_hole;
  d.params_[0] = side;
  d.params_[1] = hole_radius;
  d.area_ = side * side - 0.25 * M_PI * hole_radius * hole_radius;
  d.diameter_ = side * std::sqrt(2.0);
  d.clip_polygon_ = {{0, 0}, {side, 0}, {side, side}, {0, side}};
  BoundaryFeature hole;
  hole.kind = BoundaryFeature::Kind::arc;
  hole.marker = "hole";
  hole.center = {0, 0};
  hole.radius = hole_radius;
  hole.angle0 = 0.0;
  hole.angle1 = 0.5 * M_PI;
  hole.domain_outside = true;
  d.features_ = {
      {BoundaryFeature::Kind::segment, "symmetry_y", {hole_radius, 0}, {side, 0}},
      {BoundaryFeature::Kind::segment, "right", {side, 0}, {side, side}},
      {BoundaryFeature::Kind::segment, "top", {side, side}, {0, side}},
      {BoundaryFeature::Kind::segment, "symmetry_x", {0, side}, {0, hole_radius}},
      hole,
  };
  return d;
}

DomainShape DomainShape::quarterAnnulus(double r_inner, double r_outer) {
  if (!(r_inner > 0) || !(r_outer > r_inner))
    throw std::invalid_argument("quarterAnnulus: invalid radii");
  DomainShape d;
  d.kind_ = Kind::quarter_annulus;
  d.params_[0] = r_inner;
  d.params_[1] = r_outer;
  d.area_ = 0.25 * M_PI * (r_outer * r_outer - r_inner * r_inner);
  d.diameter_ = r_outer * std::sqrt(2.0);
  d.clip_polygon_ = {{0, 0}, {r_outer, 0}, {r_outer, r_outer}, {0, r_outer}};
  BoundaryFeature inner, outer;
  inner.kind = BoundaryFeature::Kind::arc;
  inner.marker = "inner";
  inner.center = {0, 0};
  inner.radius = r_inner;
  inner.angle0 = 0.0;
  inner.angle1 = 0.5 * M_PI;
  inner.domain_outside = true;
  outer = inner;
  outer.marker = "outer";
  outer.radius = r_outer;
  outer.domain_outside = false;
  d.features_ = {
      {BoundaryFeature::Kind::segment, "fixed", {r_inner, 0}, {r_outer, 0}},
      {BoundaryFeature::Kind::segment, "loaded", {0, r_outer}, {0, r_inner}},
      inner,
      outer,
  };
  return d;
}

double DomainShape::signedDistance(const Point2& p) const {
  switch (kind_) {
    case Kind::rectangle: {
      const double L = params_[0], H = params_[1];
      const double dx = std::max(-p.x(), p.x() - L);
      const double dy = std::max(-(p.y() + 0.5 * H), p.y() - 0.5 * H);
      return std::max(dx, dy);
    }
    case Kind::quarter_plate_with_hole: {
      const double s = params_[0], a = params_[1];
      const double box = std::max(std::max(-p.x(), p.x() - s),
                                  std::max(-p.y(), p.y() - s));
      return std::max(box, a - p.norm());
    }
    case Kind::quarter_annulus: {
      const double ri = params_[0], ro = params_[1];
      const double wedge = std::max(-p.x(), -p.y());
      const double r = p.norm();
      return std::max(wedge, std::max(r - ro, ri - r));
    }
  }
  return 0.0;
}

int DomainShape::nearestFeature(const Point2& p) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < features_.size(); ++i) {
    const double d = features_[i].distanceTo(p);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

SeedSet randomSeeds(const DomainShape& domain, int count, std::uint64_t rng_seed) {
  if (count < 1) throw std::invalid_argument("randomSeeds: count must be >= 1");
  std::mt19937_64 rng(rng_seed);
  // bounding box of the clip polygon
  Point2 lo = domain.clipPolygon()[0], hi = lo;
  for (const Point2& v : domain.clipPolygon()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y());
  const double margin = -1e-9 * domain.diameter();
  SeedSet seeds;
  seeds.points.reserve(count);
  int guard = 0;
  while (static_cast<int>(seeds.points.size()) < count) {
    if (++guard > 1000 * count + 100000)
      throw std::runtime_error("randomSeeds: rejection sampling failed");
    Point2 p(ux(rng), uy(rng));
    if (domain.signedDistance(p) < margin) seeds.points.push_back(p);
  }
  return seeds;
}

std::vector<Point2> PolygonMesh::cellVertices(int cell) const {
  std::vector<Point2> v;
  v.reserve(cells[cell].size());
  for (int idx : cells[cell]) v.push_back(nodes[idx]);
  return v;
}

double PolygonMesh::cellArea(int cell) const { return polygonArea(cellVertices(cell)); }

double PolygonMesh::totalArea() const {
  double a = 0.0;
  for (int c = 0; c < cellCount(); ++c) a += cellArea(c);
  return a;
}

void PolygonMesh::validate() const {
  const int nn = nodeCount();
  double diam = 0.0;
  for (const Point2& p : nodes)
    for (const Point2& q : nodes) diam = std::max(diam, (p - q).norm());
  const double tol = 1e-12 * diam;
  // duplicate nodes
  std::vector<int> order(nn);
  for (int i = 0; i < nn; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return nodes[i].x() < nodes[j].x(); });
  for (int i = 0; i < nn; ++i) {
    for (int j = i + 1; j < nn; ++j) {
      if (nodes[order[j]].x() - nodes[order[i]].x() > tol) break;
      if ((nodes[order[i]] - nodes[order[j]]).norm() <= tol)
        throw std::runtime_error("mesh: duplicate nodes " + std::to_string(order[i]) +
                                 " and " + std::to_string(order[j]));
    }
  }
  std::map<std::pair<int, int>, int> edge_count;
  for (int c = 0; c < cellCount(); ++c) {
    const auto& cell = cells[c];
    if (cell.size() < 3)
      throw std::runtime_error("mesh: cell " + std::to_string(c) + " has fewer than 3 vertices");
    for (int idx : cell)
      if (idx < 0 || idx >= nn)
        throw std::runtime_error("mesh: cell " + std::to_string(c) +
                                 " references invalid node " + std::to_string(idx));
    const auto verts = cellVertices(c);
    if (polygonArea(verts) <= 0.0)
      throw std::runtime_error("mesh: cell " + std::to_string(c) +
                               " is not CCW / has non-positive area");
    if (!polygonIsConvexCcw(verts))
      throw std::runtime_error("mesh: cell " + std::to_string(c) + " is not convex");
    const int k = static_cast<int>(cell.size());
    for (int i = 0; i < k; ++i) {
      const int a = cell[i], b = cell[(i + 1) % k];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  for (const auto& [key, count] : edge_count)
    if (count > 2)
      throw std::runtime_error("mesh: edge shared by more than two cells");
  for (const auto& be : boundary_edges) {
    auto it = edge_count.find({std::min(be.a, be.b), std::max(be.a, be.b)});
    if (it == edge_count.end() || it->second != 1)
      throw std::runtime_error("mesh: boundary edge (" + std::to_string(be.a) + "," +
                               std::to_string(be.b) + ") not owned by exactly one cell");
  }
}

}  // namespace htpoly
