#include "htpoly/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace htpoly {

std::vector<Point2> clipHalfPlane(const std::vector<Point2>& poly,
                                  const Point2& n, double c) {
  std::vector<Point2> out;
  const int k = static_cast<int>(poly.size());
  out.reserve(k + 1);
  for (int i = 0; i < k; ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % k];
    const double dp = n.dot(p) - c;
    const double dq = n.dot(q) - c;
    if (dp <= 0.0) {
      out.push_back(p);
      if (dq > 0.0) out.push_back(p + (dp / (dp - dq)) * (q - p));
    } else if (dq <= 0.0) {
      out.push_back(p + (dp / (dp - dq)) * (q - p));
    }
  }
  return out;
}

namespace {

std::vector<Point2> arcMirrors(const Point2& seed, const DomainShape& domain) {
  std::vector<Point2> mirrors;
  for (const auto& f : domain.features()) {
    if (f.kind != BoundaryFeature::Kind::arc) continue;
    const Point2 rel = seed - f.center;
    const double r = rel.norm();
    if (r < 1e-14) continue;
    const double rp = 2.0 * f.radius - r;
    if (rp <= 1e-12 * domain.diameter()) continue;
    const Point2 m = f.center + (rp / r) * rel;
    if (domain.contains(m)) continue;  // mirror must land outside
    mirrors.push_back(m);
  }
  return mirrors;
}

// One Voronoi cell: clip polygon cut by bisectors against other seeds and
// all arc mirrors, nearest candidates first so far ones can be skipped.
std::vector<Point2> cellForSeed(int i, const std::vector<Point2>& seeds,
                                const std::vector<Point2>& mirrors,
                                const DomainShape& domain) {
  const Point2 s = seeds[i];
  std::vector<std::pair<double, const Point2*>> cand;
  cand.reserve(seeds.size() + mirrors.size());
  for (size_t j = 0; j < seeds.size(); ++j)
    if (static_cast<int>(j) != i) cand.emplace_back((seeds[j] - s).norm(), &seeds[j]);
  for (const Point2& m : mirrors) cand.emplace_back((m - s).norm(), &m);
  std::sort(cand.begin(), cand.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<Point2> poly = domain.clipPolygon();
  for (const auto& [dist, t] : cand) {
    double rmax = 0.0;
    for (const Point2& v : poly) rmax = std::max(rmax, (v - s).norm());
    if (0.5 * dist > rmax) break;
    const Point2 n = *t - s;
    const double c = 0.5 * (t->squaredNorm() - s.squaredNorm());
    poly = clipHalfPlane(poly, n, c);
    if (poly.size() < 3)
      throw std::runtime_error("voronoi: degenerate cell for seed " + std::to_string(i));
  }
  return poly;
}

std::vector<std::vector<Point2>> rawCells(const SeedSet& seeds,
                                          const DomainShape& domain) {
  const double tol = 1e-12 * domain.diameter();
  for (size_t i = 0; i < seeds.points.size(); ++i) {
    if (!domain.contains(seeds.points[i]))
      throw std::invalid_argument("voronoi: seed " + std::to_string(i) +
                                  " lies outside the domain");
    for (size_t j = i + 1; j < seeds.points.size(); ++j)
      if ((seeds.points[i] - seeds.points[j]).norm() <= tol)
        throw std::invalid_argument("voronoi: duplicate seeds " + std::to_string(i) +
                                    " and " + std::to_string(j));
  }
  std::vector<Point2> mirrors;
  for (const Point2& s : seeds.points)
    for (const Point2& m : arcMirrors(s, domain)) mirrors.push_back(m);
  std::vector<std::vector<Point2>> cells(seeds.points.size());
  for (size_t i = 0; i < seeds.points.size(); ++i)
    cells[i] = cellForSeed(static_cast<int>(i), seeds.points, mirrors, domain);
  return cells;
}

}  // namespace

PolygonMesh voronoiCells(const SeedSet& seeds, const DomainShape& domain) {
  const auto raw = rawCells(seeds, domain);
  const double tol = 1e-12 * domain.diameter();

  // Merge vertices into a global node table. Cells are small and shared
  // vertices agree to ~1e-14 relative, so a grid hash keyed on snapped
  // coordinates finds duplicates.
  PolygonMesh mesh;
  std::map<std::pair<long long, long long>, std::vector<int>> grid;
  const double cell_size = std::max(tol * 16.0, 1e-300);
  auto findOrInsert = [&](const Point2& p) {
    const long long gx = static_cast<long long>(std::floor(p.x() / cell_size));
    const long long gy = static_cast<long long>(std::floor(p.y() / cell_size));
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = grid.find({gx + dx, gy + dy});
        if (it == grid.end()) continue;
        for (int idx : it->second)
          if ((mesh.nodes[idx] - p).norm() <= tol) return idx;
      }
    mesh.nodes.push_back(p);
    const int idx = static_cast<int>(mesh.nodes.size()) - 1;
    grid[{gx, gy}].push_back(idx);
    return idx;
  };

  for (const auto& poly : raw) {
    std::vector<int> cell;
    for (const Point2& v : poly) {
      const int idx = findOrInsert(v);
      if (cell.empty() || cell.back() != idx) cell.push_back(idx);
    }
    while (cell.size() > 1 && cell.front() == cell.back()) cell.pop_back();
    if (cell.size() < 3)
      throw std::runtime_error("voronoi: cell collapsed during node merge");
    mesh.cells.push_back(std::move(cell));
  }

  auto edgeKey = [](int a, int b) { return std::pair(std::min(a, b), std::max(a, b)); };
  auto countEdges = [&]() {
    std::map<std::pair<int, int>, int> count;
    for (const auto& cell : mesh.cells) {
      const int k = static_cast<int>(cell.size());
      for (int i = 0; i < k; ++i) count[edgeKey(cell[i], cell[(i + 1) % k])]++;
    }
    return count;
  };

  // Snap boundary nodes whose nearest boundary feature is an arc onto the
  // exact arc (radial projection). Straight features pass through the arc
  // centers of the benchmark domains, so junction nodes stay on both.
  auto edge_count = countEdges();
  std::vector<bool> on_boundary(mesh.nodes.size(), false);
  for (const auto& [key, count] : edge_count)
    if (count == 1) on_boundary[key.first] = on_boundary[key.second] = true;
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    if (!on_boundary[i]) continue;
    const int fi = domain.nearestFeature(mesh.nodes[i]);
    const auto& f = domain.features()[fi];
    if (f.kind != BoundaryFeature::Kind::arc) continue;
    const Point2 rel = mesh.nodes[i] - f.center;
    const double r = rel.norm();
    if (r > 1e-12 * domain.diameter())
      mesh.nodes[i] = f.center + (f.radius / r) * rel;
  }

  // Projection onto a hole-side arc can leave a cell with two chords meeting
  // at a reflex vertex. Such a vertex belongs to that cell alone; dropping it
  // restores convexity without touching conformity.
  std::vector<int> node_use(mesh.nodes.size(), 0);
  for (const auto& cell : mesh.cells)
    for (int idx : cell) node_use[idx]++;
  for (auto& cell : mesh.cells) {
    bool changed = true;
    while (changed && cell.size() > 3) {
      changed = false;
      const int k = static_cast<int>(cell.size());
      for (int i = 0; i < k; ++i) {
        const Point2& a = mesh.nodes[cell[(i + k - 1) % k]];
        const Point2& b = mesh.nodes[cell[i]];
        const Point2& c = mesh.nodes[cell[(i + 1) % k]];
        const double cr = (b - a).x() * (c - b).y() - (b - a).y() * (c - b).x();
        if (cr < -tol * domain.diameter() && node_use[cell[i]] == 1) {
          node_use[cell[i]] = 0;
          cell.erase(cell.begin() + i);
          changed = true;
          break;
        }
      }
    }
  }

  // Drop orphaned nodes and reindex.
  std::vector<int> remap(mesh.nodes.size(), -1);
  {
    std::vector<Point2> kept;
    std::vector<bool> used(mesh.nodes.size(), false);
    for (const auto& cell : mesh.cells)
      for (int idx : cell) used[idx] = true;
    for (size_t i = 0; i < mesh.nodes.size(); ++i)
      if (used[i]) {
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(mesh.nodes[i]);
      }
    mesh.nodes = std::move(kept);
    for (auto& cell : mesh.cells)
      for (int& idx : cell) idx = remap[idx];
  }

  edge_count = countEdges();
  for (const auto& [key, count] : edge_count) {
    if (count != 1) continue;
    PolygonMesh::BoundaryEdge be;
    be.a = key.first;
    be.b = key.second;
    const Point2 mid = 0.5 * (mesh.nodes[be.a] + mesh.nodes[be.b]);
    be.marker = domain.features()[domain.nearestFeature(mid)].marker;
    mesh.boundary_edges.push_back(be);
  }

  mesh.validate();
  return mesh;
}

SeedSet lloydIterate(const SeedSet& seeds, const DomainShape& domain,
                     int max_iters, double tol) {
  SeedSet current = seeds;
  for (int iter = 0; iter < max_iters; ++iter) {
    const auto cells = rawCells(current, domain);
    double move = 0.0;
    SeedSet next;
    next.points.reserve(current.points.size());
    for (size_t i = 0; i < cells.size(); ++i) {
      const auto [centroid, area] = polygonCentroidArea(cells[i]);
      if (area <= 0.0)
        throw std::runtime_error("lloyd: zero-area cell for seed " + std::to_string(i));
      next.points.push_back(centroid);
      move = std::max(move, (centroid - current.points[i]).norm());
    }
    current = std::move(next);
    if (move < tol) break;
  }
  return current;
}

double cvtEnergy(const SeedSet& seeds, const DomainShape& domain) {
  const auto cells = rawCells(seeds, domain);
  double energy = 0.0;
  for (size_t i = 0; i < cells.size(); ++i) {
    const Point2& p = seeds.points[i];
    const auto& poly = cells[i];
    // fan triangulation, edge-midpoint rule (exact for quadratics)
    for (size_t t = 1; t + 1 < poly.size(); ++t) {
      const Point2& a = poly[0];
      const Point2& b = poly[t];
      const Point2& c = poly[t + 1];
      const double area = 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
      const Point2 m0 = 0.5 * (a + b), m1 = 0.5 * (b + c), m2 = 0.5 * (c + a);
      energy += area / 3.0 *
                ((m0 - p).squaredNorm() + (m1 - p).squaredNorm() + (m2 - p).squaredNorm());
    }
  }
  return energy;
}

}  // namespace htpoly
