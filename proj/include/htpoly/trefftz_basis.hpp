#pragma once

#include "htpoly/geometry.hpp"
#include "htpoly/material.hpp"

#include <optional>
#include <vector>

namespace htpoly {

/// Index of one T-complete plane-elasticity mode: family J in {1,2,3,4} and
/// power k >= 1. In terms of the complex potentials, J=1: phi = i z^k,
/// J=2: phi = z^k, J=3: psi = i z^k, J=4: psi = z^k.
struct ModeIndex {
  int J = 0;
  int k = 0;
  bool operator==(const ModeIndex&) const = default;
};

/// k = 1, 2, ... and J = 1..4 within each k, skipping (J=1, k=1) whose
/// displacement i(kappa+1)z is a rigid rotation with zero stress; truncated
/// to m entries.
std::vector<ModeIndex> defaultOrdering(int m);

/// Per-point evaluation of all modes of a set: displacement columns (2 x m),
/// stress columns in Voigt order (3 x m), and when a normal is given the
/// traction columns Q = A T (2 x m).
struct ModeEvaluation {
  Eigen::Matrix2Xd displacement;
  Eigen::Matrix3Xd stress;
  Eigen::Matrix2Xd traction;  // empty unless a normal was supplied
};

class TrefftzModeSet {
 public:
  /// Test-support variants covering two readings of the classical potential
  /// formulas; `standard` is the one that passes the finite-difference
  /// displacement-stress consistency check.
  enum class Variant { standard, s3_scaled_by_kappa };

  TrefftzModeSet(MaterialModel material, Point2 origin, double scale,
                 std::vector<ModeIndex> ordering,
                 Variant variant = Variant::standard);

  /// Convenience: defaultOrdering(m).
  TrefftzModeSet(MaterialModel material, Point2 origin, double scale, int m,
                 Variant variant = Variant::standard);

  int modeCount() const { return static_cast<int>(ordering_.size()); }
  const std::vector<ModeIndex>& ordering() const { return ordering_; }
  const MaterialModel& material() const { return material_; }
  const Point2& origin() const { return origin_; }
  double scale() const { return scale_; }
  int maxPower() const;

  ModeEvaluation evaluate(const Point2& point,
                          std::optional<Point2> normal = std::nullopt) const;

 private:
  MaterialModel material_;
  Point2 origin_;
  double scale_;
  std::vector<ModeIndex> ordering_;
  Variant variant_;
};

/// Finite-difference cross-checks of the mode set: (a) stress equilibrium
/// div(sigma) = 0 and (b) D * sym-grad(displacement) = stress, both sampled
/// inside the unit disk of the local frame with central differences.
struct VerificationReport {
  struct ModeResult {
    ModeIndex mode;
    double equilibrium_residual = 0.0;  // relative to the mode stress scale
    double consistency_residual = 0.0;
    bool passed = false;
  };
  std::vector<ModeResult> modes;
  bool all_passed = false;
};

VerificationReport verifyModeSet(const TrefftzModeSet& set, int sample_points,
                                 double h_fd, double tolerance = 1e-5);

}  // namespace htpoly
