#pragma once

#include "htpoly/geometry.hpp"
#include "htpoly/ht_element.hpp"
#include "htpoly/material.hpp"

namespace htpoly {

/// Wachspress rational coordinates on a convex polygon: partition of unity,
/// linear completeness, Kronecker delta at the vertices. Boundary points use
/// the linear limit on the edge (the rational form is 0/0 there).
struct WachspressEval {
  Eigen::VectorXd values;          // n
  Eigen::Matrix2Xd gradients;      // 2 x n
};

WachspressEval wachspressEval(const std::vector<Point2>& polygon, const Point2& point);

/// Conventional polygonal FEM stiffness: fan-triangulated order-6 Dunavant
/// accumulation of B^T D B.
Eigen::MatrixXd pfemStiffness(const std::vector<Point2>& polygon,
                              const MaterialModel& material);

/// Same contract as elementTractionLoad; the edge restriction of Wachspress
/// is the linear 1D interpolation.
Eigen::VectorXd pfemTractionLoad(const std::vector<Point2>& polygon,
                                 const std::vector<int>& edges,
                                 const TractionFn& traction);

}  // namespace htpoly
