#pragma once

#include "htpoly/assembly.hpp"
#include "htpoly/geometry.hpp"
#include "htpoly/material.hpp"

#include <functional>
#include <optional>
#include <string>

namespace htpoly {

/// Closed-form displacement/stress pair of a benchmark problem.
struct AnalyticalField {
  std::function<Eigen::Vector2d(const Point2&)> displacement;
  std::function<Eigen::Vector3d(const Point2&)> stress;

  /// Max relative residuals of D*sym-grad(u) = sigma and div(sigma) = 0 via
  /// central differences at the given points.
  std::pair<double, double> selfConsistency(const MaterialModel& material,
                                            const std::vector<Point2>& points,
                                            double h_fd = 1e-5) const;
};

struct CantileverParams {
  double length = 10.0;
  double depth = 2.0;
  double E = 3e7;
  double nu = 0.25;
  double load = 150.0;  // resultant of the parabolic end shear
  Regime regime = Regime::plane_stress;
};

/// End-loaded cantilever: closed-form displacement/stress field.
AnalyticalField cantileverExact(const CantileverParams& p);

struct KirschParams {
  double hole_radius = 1.0;
  double side = 5.0;
  double E = 1e5;
  double nu = 0.3;
  double tension = 1.0;
  Regime regime = Regime::plane_stress;
};

/// Infinite plate with a traction-free circular hole under remote uniaxial
/// tension along x. Valid for r >= hole radius.
AnalyticalField kirschExact(const KirschParams& p);

struct CircularBeamParams {
  double r_inner = 1.0;
  double r_outer = 2.0;
  double E = 2e4;
  double nu = 0.25;
  double end_displacement = -0.01;  // applied normal to the free end face
  Regime regime = Regime::plane_stress;
};

/// Reference strain energy (1/pi)(ln(r_outer/r_inner) + (ri^2-ro^2)/(ri^2+ro^2))
/// scaled to the parameters; equals (1/pi)(ln 2 - 0.6) for the defaults.
double circularBeamReferenceEnergy(const CircularBeamParams& p);

/// A full problem setup: domain, material, boundary conditions, and the
/// analytical field when one exists.
struct BenchmarkCase {
  std::string name;
  DomainShape domain;
  MaterialModel material;
  BoundaryConditionSet bcs;
  std::optional<AnalyticalField> exact;
  std::optional<double> exact_energy;
};

BenchmarkCase cantileverCase(const CantileverParams& p = {});
BenchmarkCase plateHoleCase(const KirschParams& p = {});
BenchmarkCase circularBeamCase(const CircularBeamParams& p = {});

BenchmarkCase benchmarkByName(const std::string& name);

/// Relative L2 and energy error of a solved system against the analytical
/// field: element-wise order-6 Dunavant integration over fan triangles, with
/// the HT interior taken from the Trefftz expansion and the PFEM interior
/// from the Wachspress interpolation.
struct ErrorNorms {
  double l2 = 0.0;
  double energy = 0.0;
};

ErrorNorms errorNorms(const PolygonMesh& mesh, const GlobalSystem& system,
                      const Eigen::VectorXd& d, const MaterialModel& material,
                      const AnalyticalField& exact);

}  // namespace htpoly
