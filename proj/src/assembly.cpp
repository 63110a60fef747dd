#include "htpoly/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace htpoly {

namespace {

int threadBudget(int n_tasks) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("TREFFTZ_POLY_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return std::max(1, std::min<int>(static_cast<int>(hw), n_tasks));
}

void parallelFor(int n, const std::function<void(int)>& body) {
  const int n_threads = threadBudget(n);
  if (n_threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// (owning cell, local edge index) for each boundary edge
std::map<std::pair<int, int>, std::pair<int, int>> boundaryEdgeOwners(
    const PolygonMesh& mesh) {
  std::map<std::pair<int, int>, std::pair<int, int>> owners;
  for (int c = 0; c < mesh.cellCount(); ++c) {
    const auto& cell = mesh.cells[c];
    const int k = static_cast<int>(cell.size());
    for (int i = 0; i < k; ++i) {
      const int a = cell[i], b = cell[(i + 1) % k];
      owners[{std::min(a, b), std::max(a, b)}] = {c, i};
    }
  }
  return owners;
}

}  // namespace

GlobalSystem assemble(const PolygonMesh& mesh, const MaterialModel& material,
                      Method method, const BoundaryConditionSet& bcs) {
  const int n_cells = mesh.cellCount();
  const int n_dofs = 2 * mesh.nodeCount();
  GlobalSystem system;
  system.method = method;
  system.f = Eigen::VectorXd::Zero(n_dofs);

  std::vector<Eigen::MatrixXd> element_k(n_cells);
  if (method == Method::HT) system.ht_elements.resize(n_cells);
  parallelFor(n_cells, [&](int c) {
    try {
      const auto verts = mesh.cellVertices(c);
      if (method == Method::HT) {
        auto elem = std::make_shared<HtElement>(verts, material);
        element_k[c] = elem->K();
        system.ht_elements[c] = std::move(elem);
      } else {
        element_k[c] = pfemStiffness(verts, material);
      }
    } catch (const std::exception& err) {
      throw std::runtime_error("element " + std::to_string(c) + ": " + err.what());
    }
  });

  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < n_cells; ++c) {
    const auto& cell = mesh.cells[c];
    const int k = static_cast<int>(cell.size());
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int di = 0; di < 2; ++di)
          for (int dj = 0; dj < 2; ++dj)
            triplets.emplace_back(2 * cell[i] + di, 2 * cell[j] + dj,
                                  element_k[c](2 * i + di, 2 * j + dj));
  }
  system.K.resize(n_dofs, n_dofs);
  system.K.setFromTriplets(triplets.begin(), triplets.end());

  const auto owners = boundaryEdgeOwners(mesh);
  auto ownerOf = [&](const PolygonMesh::BoundaryEdge& be) {
    auto it = owners.find({std::min(be.a, be.b), std::max(be.a, be.b)});
    if (it == owners.end())
      throw std::runtime_error("assemble: boundary edge without owning cell");
    return it->second;
  };

  for (const auto& bc : bcs.neumann) {
    for (const auto& be : mesh.boundary_edges) {
      if (be.marker != bc.marker) continue;
      const auto [c, local_edge] = ownerOf(be);
      const auto verts = mesh.cellVertices(c);
      const Eigen::VectorXd load = elementTractionLoad(verts, {local_edge}, bc.traction);
      const auto& cell = mesh.cells[c];
      for (size_t i = 0; i < cell.size(); ++i) {
        system.f(2 * cell[i]) += load(2 * i);
        system.f(2 * cell[i] + 1) += load(2 * i + 1);
      }
    }
  }

  for (const auto& bc : bcs.dirichlet) {
    for (const auto& be : mesh.boundary_edges) {
      if (be.marker != bc.marker) continue;
      for (int node : {be.a, be.b}) {
        const Eigen::Vector2d value = bc.value(mesh.nodes[node]);
        for (int comp = 0; comp < 2; ++comp) {
          if (bc.component == DirichletBc::Component::x && comp == 1) continue;
          if (bc.component == DirichletBc::Component::y && comp == 0) continue;
          const int dof = 2 * node + comp;
          const auto [it, inserted] = system.constraints.insert({dof, value(comp)});
          if (!inserted &&
              std::abs(it->second - value(comp)) >
                  1e-12 * (1.0 + std::abs(it->second)))
            throw std::runtime_error("assemble: conflicting Dirichlet values at node " +
                                     std::to_string(node));
        }
      }
    }
  }

  for (const auto& pin : bcs.pins) {
    if (pin.component < 0 || pin.component > 1)
      throw std::invalid_argument("assemble: pin component must be 0 or 1");
    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int v = 0; v < mesh.nodeCount(); ++v) {
      const double dist = (mesh.nodes[v] - pin.location).norm();
      if (dist < best) {
        best = dist;
        nearest = v;
      }
    }
    const int dof = 2 * nearest + pin.component;
    const auto [it, inserted] = system.constraints.insert({dof, pin.value});
    if (!inserted && std::abs(it->second - pin.value) >
                         1e-12 * (1.0 + std::abs(it->second)))
      throw std::runtime_error("assemble: pin conflicts with Dirichlet value at node " +
                               std::to_string(nearest));
  }
  return system;
}

ReducedSystem applyDirichlet(const GlobalSystem& system) {
  const int n = static_cast<int>(system.K.rows());
  ReducedSystem reduced;
  reduced.full_values = Eigen::VectorXd::Zero(n);
  std::vector<int> reduced_index(n, -1);
  for (int dof = 0; dof < n; ++dof) {
    auto it = system.constraints.find(dof);
    if (it != system.constraints.end()) {
      reduced.full_values(dof) = it->second;
    } else {
      reduced_index[dof] = static_cast<int>(reduced.free_dofs.size());
      reduced.free_dofs.push_back(dof);
    }
  }
  const int nf = static_cast<int>(reduced.free_dofs.size());
  reduced.rhs.resize(nf);
  for (int i = 0; i < nf; ++i) reduced.rhs(i) = system.f(reduced.free_dofs[i]);

  std::vector<Eigen::Triplet<double>> triplets;
  for (int col = 0; col < system.K.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.K, col); it; ++it) {
      const int ri = reduced_index[it.row()];
      const int ci = reduced_index[it.col()];
      if (ri >= 0 && ci >= 0) {
        triplets.emplace_back(ri, ci, it.value());
      } else if (ri >= 0 && ci < 0) {
        reduced.rhs(ri) -= it.value() * reduced.full_values(it.col());
      }
    }
  }
  reduced.K.resize(nf, nf);
  reduced.K.setFromTriplets(triplets.begin(), triplets.end());
  return reduced;
}

Eigen::VectorXd solveReduced(const ReducedSystem& reduced) {
  Eigen::VectorXd full = reduced.full_values;
  if (reduced.free_dofs.empty()) return full;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(reduced.K);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("solve: sparse factorization failed");
  const double min_pivot = ldlt.vectorD().minCoeff();
  const double max_pivot = ldlt.vectorD().maxCoeff();
  if (!(min_pivot > 0.0) || min_pivot < 1e-14 * max_pivot)
    throw std::runtime_error("solve: matrix is singular or indefinite (smallest pivot " +
                             std::to_string(min_pivot) + ")");
  const Eigen::VectorXd d = ldlt.solve(reduced.rhs);
  const double rhs_norm = reduced.rhs.norm();
  const double residual = (reduced.K * d - reduced.rhs).norm();
  if (rhs_norm > 0.0 && residual > 1e-10 * rhs_norm)
    throw std::runtime_error("solve: residual " + std::to_string(residual / rhs_norm) +
                             " exceeds tolerance");
  for (size_t i = 0; i < reduced.free_dofs.size(); ++i)
    full(reduced.free_dofs[i]) = d(i);
  return full;
}

double strainEnergy(const GlobalSystem& system, const Eigen::VectorXd& d) {
  return 0.5 * d.dot(system.K * d);
}

}  // namespace htpoly
