#pragma once

#include "htpoly/benchmarks.hpp"

#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

namespace htpoly {

struct ConvergenceRow {
  int n_elements = 0;
  int n_dof = 0;
  double h = 0.0;
  double l2_error = std::numeric_limits<double>::quiet_NaN();
  double energy_error = std::numeric_limits<double>::quiet_NaN();
  double strain_energy = 0.0;
};

struct ConvergenceRecord {
  std::string benchmark;
  Method method = Method::HT;
  std::vector<ConvergenceRow> rows;
  double l2Slope() const;
  double energySlope() const;
};

/// Least-squares slope of log10(error) against log10(h); NaN when fewer
/// than two finite points.
double fitSlope(const std::vector<double>& h, const std::vector<double>& error);

/// CVT mesh of the requested size: seeded pseudo-randomly, Lloyd-relaxed.
PolygonMesh generateBenchmarkMesh(const DomainShape& domain, int cells,
                                  std::uint64_t seed, int lloyd_iters = 100);

/// Assemble, solve, and measure one mesh. `reference_energy` feeds the
/// energy-vs-limit error when the case has no analytical field.
ConvergenceRow runSingleMesh(const BenchmarkCase& bench, Method method,
                             const PolygonMesh& mesh,
                             std::optional<double> reference_energy = std::nullopt);

struct ConvergenceOptions {
  std::uint64_t seed = 42;
  int lloyd_iters = 100;
  /// Energy reference for benchmarks without a closed-form field; when unset
  /// one is computed from an HT run on a 4x-finer mesh.
  std::optional<double> reference_energy;
};

/// Full study: h = sqrt(domain area / n_elements) per mesh, least-squares
/// slopes per error norm.
ConvergenceRecord runConvergence(const BenchmarkCase& bench, Method method,
                                 const std::vector<int>& sizes,
                                 const ConvergenceOptions& options = {});

std::string methodName(Method method);

void writeCsvHeader(std::ostream& out);
void writeCsvRow(std::ostream& out, const std::string& benchmark, Method method,
                 const ConvergenceRow& row);

/// Whitespace-separated log10(h) log10(error) pairs plus a comment line with
/// the fitted slope; one block per error norm.
void writePlotData(std::ostream& out, const ConvergenceRecord& record);

}  // namespace htpoly
