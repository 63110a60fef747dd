#pragma once

#include "htpoly/geometry.hpp"
#include "htpoly/material.hpp"
#include "htpoly/trefftz_basis.hpp"

#include <functional>
#include <memory>

namespace htpoly {

using TractionFn = std::function<Eigen::Vector2d(const Point2&)>;

/// How the T-complete mode count is chosen for an element. The default takes
/// the smallest m >= N_dof - 1 and retries with m + 4 while H is numerically
/// rank deficient.
struct ModePolicy {
  int min_modes_offset = -1;       // m0 = N_dof + offset
  int retry_increment = 4;
  int max_retries = 3;
  double rank_tolerance = 1e-10;   // smallest/largest singular value of H
};

/// Hybrid Trefftz element: boundary-only matrices
///   H = int_Gamma Q^T N dGamma,   G = int_Gamma Q^T Ntilde dGamma,
/// condensed stiffness K = G^T H^{-1} G, and the interior recovery c = H^{-1} G q.
class HtElement {
 public:
  HtElement(std::vector<Point2> polygon, const MaterialModel& material,
            const ModePolicy& policy = {});

  int nodeCount() const { return static_cast<int>(polygon_.size()); }
  int dofCount() const { return 2 * nodeCount(); }
  int modeCount() const { return mode_set_->modeCount(); }

  const Eigen::MatrixXd& H() const { return H_; }
  const Eigen::MatrixXd& G() const { return G_; }
  const Eigen::MatrixXd& K() const { return K_; }
  const TrefftzModeSet& modeSet() const { return *mode_set_; }
  const std::vector<Point2>& polygon() const { return polygon_; }

  double smallestSingularValue() const { return sv_min_; }
  double largestSingularValue() const { return sv_max_; }

  /// Interior Trefftz field recovered from the element's nodal displacements.
  /// The rigid-body part, invisible to the stress modes, is restored by a
  /// nodal least-squares fit against the frame.
  struct InteriorField {
    Eigen::VectorXd coefficients;
    Eigen::Vector3d rigid;  // (tx, ty, rotation about the local origin)
    std::shared_ptr<const TrefftzModeSet> modes;
    Eigen::Vector2d displacement(const Point2& x) const;
    Eigen::Vector3d stress(const Point2& x) const;
  };

  InteriorField recoverInterior(const Eigen::VectorXd& q) const;

 private:
  void assemble();

  std::vector<Point2> polygon_;
  MaterialModel material_;
  std::shared_ptr<const TrefftzModeSet> mode_set_;
  Eigen::MatrixXd H_, G_, K_;
  Eigen::LDLT<Eigen::MatrixXd> h_factor_;
  double sv_min_ = 0.0, sv_max_ = 0.0;
};

/// Consistent nodal load of a traction applied on a subset of the polygon's
/// edges (local edge i runs from vertex i to vertex i+1); fixed 8-point
/// Gauss rule per edge, linear frame.
Eigen::VectorXd elementTractionLoad(const std::vector<Point2>& polygon,
                                    const std::vector<int>& edges,
                                    const TractionFn& traction);

}  // namespace htpoly
