#include "htpoly/convergence.hpp"

#include "htpoly/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace htpoly {

double fitSlope(const std::vector<double>& h, const std::vector<double>& error) {
  std::vector<double> xs, ys;
  for (size_t i = 0; i < h.size() && i < error.size(); ++i) {
    if (!(h[i] > 0.0) || !(error[i] > 0.0) || !std::isfinite(error[i])) continue;
    xs.push_back(std::log10(h[i]));
    ys.push_back(std::log10(error[i]));
  }
  const size_t n = xs.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double ConvergenceRecord::l2Slope() const {
  std::vector<double> h, e;
  for (const auto& row : rows) {
    h.push_back(row.h);
    e.push_back(row.l2_error);
  }
  return fitSlope(h, e);
}

double ConvergenceRecord::energySlope() const {
  std::vector<double> h, e;
  for (const auto& row : rows) {
    h.push_back(row.h);
    e.push_back(row.energy_error);
  }
  return fitSlope(h, e);
}

PolygonMesh generateBenchmarkMesh(const DomainShape& domain, int cells,
                                  std::uint64_t seed, int lloyd_iters) {
  const SeedSet initial = randomSeeds(domain, cells, seed);
  const SeedSet relaxed =
      lloydIterate(initial, domain, lloyd_iters, 1e-6 * domain.diameter());
  return voronoiCells(relaxed, domain);
}

ConvergenceRow runSingleMesh(const BenchmarkCase& bench, Method method,
                             const PolygonMesh& mesh,
                             std::optional<double> reference_energy) {
  const GlobalSystem system = assemble(mesh, bench.material, method, bench.bcs);
  const Eigen::VectorXd d = solve(system);

  ConvergenceRow row;
  row.n_elements = mesh.cellCount();
  row.n_dof = 2 * mesh.nodeCount();
  row.h = std::sqrt(bench.domain.area() / mesh.cellCount());
  row.strain_energy = strainEnergy(system, d);
  if (bench.exact) {
    const ErrorNorms norms = errorNorms(mesh, system, d, bench.material, *bench.exact);
    row.l2_error = norms.l2;
    row.energy_error = norms.energy;
  } else if (reference_energy) {
    row.energy_error =
        std::sqrt(std::abs(row.strain_energy - *reference_energy) /
                  std::abs(*reference_energy));
  }
  return row;
}

ConvergenceRecord runConvergence(const BenchmarkCase& bench, Method method,
                                 const std::vector<int>& sizes,
                                 const ConvergenceOptions& options) {
  if (sizes.empty()) throw std::invalid_argument("runConvergence: no mesh sizes");
  std::optional<double> reference_energy = options.reference_energy;
  if (!bench.exact && !reference_energy) reference_energy = bench.exact_energy;
  if (!bench.exact && !reference_energy) {
    // No closed-form limit either: estimate one from a much finer HT run.
    const int fine = 4 * *std::max_element(sizes.begin(), sizes.end());
    const PolygonMesh mesh = generateBenchmarkMesh(
        bench.domain, fine, options.seed + 977, options.lloyd_iters);
    reference_energy = runSingleMesh(bench, Method::HT, mesh).strain_energy;
  }

  ConvergenceRecord record;
  record.benchmark = bench.name;
  record.method = method;
  for (size_t i = 0; i < sizes.size(); ++i) {
    try {
      const PolygonMesh mesh = generateBenchmarkMesh(
          bench.domain, sizes[i], options.seed + i, options.lloyd_iters);
      record.rows.push_back(runSingleMesh(bench, method, mesh, reference_energy));
    } catch (const std::exception& err) {
      throw std::runtime_error("convergence stage failed for mesh of " +
                               std::to_string(sizes[i]) + " elements: " + err.what());
    }
  }
  return record;
}

std::string methodName(Method method) { return method == Method::HT ? "ht" : "pfem"; }

void writeCsvHeader(std::ostream& out) {
  out << "benchmark,method,n_elements,n_dof,h,l2_error,energy_error,strain_energy\n";
}

void writeCsvRow(std::ostream& out, const std::string& benchmark, Method method,
                 const ConvergenceRow& row) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%.12g,%.12g,%.12g,%.12g\n",
                benchmark.c_str(), methodName(method).c_str(), row.n_elements,
                row.n_dof, row.h, row.l2_error, row.energy_error, row.strain_energy);
  out << buf;
}

void writePlotData(std::ostream& out, const ConvergenceRecord& record) {
  char buf[96];
  auto block = [&](const char* label, auto get, double slope) {
    out << "# " << record.benchmark << " " << methodName(record.method) << " "
        << label << ", slope " << (std::isfinite(slope) ? std::to_string(slope) : "n/a")
        << "\n";
    for (const auto& row : record.rows) {
      if (!(get(row) > 0.0)) continue;
      std::snprintf(buf, sizeof buf, "%.12g %.12g\n", std::log10(row.h),
                    std::log10(get(row)));
      out << buf;
    }
  };
  block("l2", [](const ConvergenceRow& r) { return r.l2_error; }, record.l2Slope());
  block("energy", [](const ConvergenceRow& r) { return r.energy_error; },
        record.energySlope());
}

}  // namespace htpoly
