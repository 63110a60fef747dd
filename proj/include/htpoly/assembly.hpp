#pragma once

#include "htpoly/geometry.hpp"
#include "htpoly/ht_element.hpp"
#include "htpoly/material.hpp"
#include "htpoly/pfem.hpp"

#include <Eigen/Sparse>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace htpoly {

enum class Method { HT, PFEM };

struct DirichletBc {
  enum class Component { x, y, both };
  std::string marker;
  Component component = Component::both;
  std::function<Eigen::Vector2d(const Point2&)> value;  // evaluated at nodes
};

struct NeumannBc {
  std::string marker;
  TractionFn traction;
};

/// Point constraint resolved to the nearest mesh node at assembly time.
/// Used to pin residual rigid-body modes (e.g. a roller-supported body).
struct NodePin {
  Point2 location;
  int component = 0;  // 0 = x, 1 = y
  double value = 0.0;
};

struct BoundaryConditionSet {
  std::vector<DirichletBc> dirichlet;
  std::vector<NeumannBc> neumann;
  std::vector<NodePin> pins;
};

/// Assembled global system before constraint elimination. Node i owns dofs
/// (2i, 2i+1). For the HT method the per-element objects are kept for
/// interior recovery and the energy identity.
struct GlobalSystem {
  Method method = Method::HT;
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd f;
  std::map<int, double> constraints;  // dof -> prescribed value
  std::vector<std::shared_ptr<const HtElement>> ht_elements;  // empty for PFEM
};

/// Build element stiffnesses (concurrently, capped by TREFFTZ_POLY_THREADS),
/// scatter-add into the sparse global matrix, and accumulate Neumann loads
/// and Dirichlet constraints from the marked boundary edges.
GlobalSystem assemble(const PolygonMesh& mesh, const MaterialModel& material,
                      Method method, const BoundaryConditionSet& bcs);

/// Free/fixed partition: K_ff d_f = f_f - K_fc d_c.
struct ReducedSystem {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd rhs;
  std::vector<int> free_dofs;      // reduced index -> full dof index
  Eigen::VectorXd full_values;     // fixed dofs prefilled, free entries zero
};

ReducedSystem applyDirichlet(const GlobalSystem& system);

/// Direct sparse symmetric solve of the reduced system; reconstructs the
/// full nodal vector. Verifies the residual and raises on singular systems.
Eigen::VectorXd solveReduced(const ReducedSystem& reduced);

inline Eigen::VectorXd solve(const GlobalSystem& system) {
  return solveReduced(applyDirichlet(system));
}

/// 1/2 d^T K d of the unconstrained assembled matrix.
double strainEnergy(const GlobalSystem& system, const Eigen::VectorXd& d);

}  // namespace htpoly
