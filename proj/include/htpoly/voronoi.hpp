#pragma once

#include "htpoly/geometry.hpp"

namespace htpoly {

/// Clip a convex CCW polygon against the half-plane n.x <= c.
std::vector<Point2> clipHalfPlane(const std::vector<Point2>& poly,
                                  const Point2& n, double c);

/// Voronoi diagram of the seeds restricted to the domain, one convex cell
/// per seed. Curved boundary pieces are resolved by reflecting seeds across
/// the arcs and snapping the resulting boundary vertices onto the exact arc.
/// Throws std::invalid_argument for seeds outside the domain or duplicates.
PolygonMesh voronoiCells(const SeedSet& seeds, const DomainShape& domain);

/// Lloyd/CVT iteration: each step moves every seed to the centroid of its
/// Voronoi cell; stops after max_iters or when the largest seed movement
/// drops below tol.
SeedSet lloydIterate(const SeedSet& seeds, const DomainShape& domain,
                     int max_iters, double tol);

/// CVT energy sum_i int_{V_i} |x - p_i|^2 dx (non-increasing under Lloyd).
double cvtEnergy(const SeedSet& seeds, const DomainShape& domain);

}  // namespace htpoly
