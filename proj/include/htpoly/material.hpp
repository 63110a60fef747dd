#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace htpoly {

enum class Regime { plane_stress, plane_strain };

/// Isotropic linear-elastic material with the plane-elasticity constants
/// derived from (E, nu, regime).
struct MaterialModel {
  double E = 1.0;
  double nu = 0.0;
  Regime regime = Regime::plane_stress;

  MaterialModel(double young, double poisson, Regime r)
      : E(young), nu(poisson), regime(r) {
    if (!(E > 0.0)) throw std::invalid_argument("MaterialModel: E must be positive");
    if (!(nu >= 0.0 && nu < 0.5))
      throw std::invalid_argument("MaterialModel: nu must lie in [0, 0.5)");
  }

  double shearModulus() const { return E / (2.0 * (1.0 + nu)); }

  /// Kolosov constant: 3 - 4*nu (plane strain), (3 - nu)/(1 + nu) (plane stress).
  double kolosov() const {
    return regime == Regime::plane_strain ? 3.0 - 4.0 * nu : (3.0 - nu) / (1.0 + nu);
  }

  /// Constitutive matrix, Voigt order (sxx, syy, sxy) with engineering shear.
  Eigen::Matrix3d constitutive() const {
    Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
    if (regime == Regime::plane_stress) {
      const double f = E / (1.0 - nu * nu);
      d(0, 0) = d(1, 1) = f;
      d(0, 1) = d(1, 0) = f * nu;
      d(2, 2) = f * (1.0 - nu) / 2.0;
    } else {
      const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
      d(0, 0) = d(1, 1) = f * (1.0 - nu);
      d(0, 1) = d(1, 0) = f * nu;
      d(2, 2) = f * (1.0 - 2.0 * nu) / 2.0;
    }
    return d;
  }
};

inline std::pair<double, double> kolosovConstants(const MaterialModel& m) {
  return {m.shearModulus(), m.kolosov()};
}

}  // namespace htpoly
