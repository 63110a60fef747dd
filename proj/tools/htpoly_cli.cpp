// Batch front end: mesh generation, single benchmark runs, convergence
// studies, and T-complete basis verification.

#include "htpoly/convergence.hpp"
#include "htpoly/mesh_io.hpp"
#include "htpoly/trefftz_basis.hpp"
#include "htpoly/voronoi.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace htpoly;

DomainShape parseDomain(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto nums = [&](char sep) {
    std::vector<double> v;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, sep)) v.push_back(std::stod(tok));
    return v;
  };
  if (kind == "rect") {
    const auto v = nums('x');
    if (v.size() != 2) throw CLI::ValidationError("--domain", "expected rect:LxD");
    return DomainShape::rectangle(v[0], v[1]);
  }
  if (kind == "plate") {
    const auto v = args.empty() ? std::vector<double>{5.0, 1.0} : nums(',');
    if (v.size() != 2) throw CLI::ValidationError("--domain", "expected plate:side,hole_radius");
    return DomainShape::quarterPlateWithHole(v[0], v[1]);
  }
  if (kind == "annulus") {
    const auto v = args.empty() ? std::vector<double>{1.0, 2.0} : nums(',');
    if (v.size() != 2) throw CLI::ValidationError("--domain", "expected annulus:ri,ro");
    return DomainShape::quarterAnnulus(v[0], v[1]);
  }
  throw CLI::ValidationError("--domain", "unknown domain kind '" + kind + "'");
}

std::map<std::string, std::string> readConfig(const std::string& path) {
  std::map<std::string, std::string> config;
  if (path.empty()) return config;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    config[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return config;
}

BenchmarkCase configuredCase(const std::string& name,
                             const std::map<std::string, std::string>& config) {
  auto num = [&](const char* key, double fallback) {
    auto it = config.find(key);
    return it == config.end() ? fallback : std::stod(it->second);
  };
  auto regime = [&](Regime fallback) {
    auto it = config.find("regime");
    if (it == config.end()) return fallback;
    if (it->second == "plane_stress") return Regime::plane_stress;
    if (it->second == "plane_strain") return Regime::plane_strain;
    throw std::runtime_error("config: regime must be plane_stress or plane_strain");
  };
  if (name == "cantilever") {
    CantileverParams p;
    p.E = num("E", p.E);
    p.nu = num("nu", p.nu);
    p.load = num("P", p.load);
    p.regime = regime(p.regime);
    return cantileverCase(p);
  }
  if (name == "plate_hole") {
    KirschParams p;
    p.E = num("E", p.E);
    p.nu = num("nu", p.nu);
    p.tension = num("tension", p.tension);
    p.regime = regime(p.regime);
    return plateHoleCase(p);
  }
  if (name == "circular_beam") {
    CircularBeamParams p;
    p.E = num("E", p.E);
    p.nu = num("nu", p.nu);
    p.r_inner = num("r_inner", p.r_inner);
    p.r_outer = num("r_outer", p.r_outer);
    p.end_displacement = num("u0", p.end_displacement);
    p.regime = regime(p.regime);
    return circularBeamCase(p);
  }
  throw std::runtime_error("unknown benchmark '" + name + "'");
}

void checkMeshMatchesCase(const PolygonMesh& mesh, const BenchmarkCase& bench) {
  std::map<std::string, bool> present;
  for (const auto& be : mesh.boundary_edges) present[be.marker] = true;
  for (const auto& bc : bench.bcs.dirichlet)
    if (!present.count(bc.marker))
      throw std::runtime_error("mesh has no boundary edges with marker '" + bc.marker +
                               "' required by benchmark " + bench.name);
  for (const auto& bc : bench.bcs.neumann)
    if (!present.count(bc.marker))
      throw std::runtime_error("mesh has no boundary edges with marker '" + bc.marker +
                               "' required by benchmark " + bench.name);
}

std::ofstream openCsv(const std::string& path) {
  const bool fresh = !std::filesystem::exists(path) ||
                     std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path);
  if (fresh) writeCsvHeader(out);
  return out;
}

int cmdMesh(const std::string& domain_spec, int cells, std::uint64_t seed,
            int lloyd, const std::string& output) {
  const DomainShape domain = parseDomain(domain_spec);
  const PolygonMesh mesh = generateBenchmarkMesh(domain, cells, seed, lloyd);
  writeMesh(mesh, output);
  double min_q = std::numeric_limits<double>::infinity(), mean_q = 0.0;
  for (int c = 0; c < mesh.cellCount(); ++c) {
    const auto verts = mesh.cellVertices(c);
    double perimeter = 0.0;
    for (size_t i = 0; i < verts.size(); ++i)
      perimeter += (verts[(i + 1) % verts.size()] - verts[i]).norm();
    const double q = 4.0 * M_PI * polygonArea(verts) / (perimeter * perimeter);
    min_q = std::min(min_q, q);
    mean_q += q;
  }
  mean_q /= mesh.cellCount();
  std::printf("wrote %s: %d cells, quality min %.4f mean %.4f\n", output.c_str(),
              mesh.cellCount(), min_q, mean_q);
  return 0;
}

int cmdRun(const std::string& benchmark, const std::string& method_name,
           const std::string& mesh_path, const std::string& config_path,
           const std::string& csv_path, const std::string& dump_path) {
  const BenchmarkCase bench = configuredCase(benchmark, readConfig(config_path));
  const PolygonMesh mesh = readMesh(mesh_path);
  checkMeshMatchesCase(mesh, bench);
  const Method method = method_name == "ht" ? Method::HT : Method::PFEM;
  const ConvergenceRow row = runSingleMesh(bench, method, mesh, bench.exact_energy);
  if (!csv_path.empty()) {
    auto out = openCsv(csv_path);
    writeCsvRow(out, bench.name, method, row);
  } else {
    writeCsvHeader(std::cout);
    writeCsvRow(std::cout, bench.name, method, row);
  }
  if (!dump_path.empty()) {
    const GlobalSystem system = assemble(mesh, bench.material, method, bench.bcs);
    const Eigen::VectorXd d = solve(system);
    std::ofstream out(dump_path);
    if (!out) throw std::runtime_error("cannot open " + dump_path);
    char buf[96];
    for (int i = 0; i < mesh.nodeCount(); ++i) {
      std::snprintf(buf, sizeof buf, "%d %.12g %.12g\n", i, d(2 * i), d(2 * i + 1));
      out << buf;
    }
  }
  return 0;
}

int cmdConverge(const std::string& benchmark, const std::string& method_name,
                const std::vector<int>& sizes, std::uint64_t seed, int lloyd,
                const std::string& config_path, const std::string& csv_path,
                const std::string& plot_prefix) {
  const BenchmarkCase bench = configuredCase(benchmark, readConfig(config_path));
  ConvergenceOptions options;
  options.seed = seed;
  options.lloyd_iters = lloyd;

  std::vector<Method> methods;
  if (method_name == "both")
    methods = {Method::HT, Method::PFEM};
  else
    methods = {method_name == "ht" ? Method::HT : Method::PFEM};

  std::optional<std::ofstream> csv;
  if (!csv_path.empty()) csv.emplace(openCsv(csv_path));
  else writeCsvHeader(std::cout);

  for (Method method : methods) {
    const ConvergenceRecord record = runConvergence(bench, method, sizes, options);
    for (const auto& row : record.rows)
      writeCsvRow(csv ? *csv : std::cout, record.benchmark, method, row);
    auto slopeText = [](double s) {
      return std::isfinite(s) ? std::to_string(s) : std::string("n/a");
    };
    std::printf("%s %s: l2 slope: %s, energy slope: %s\n", record.benchmark.c_str(),
                methodName(method).c_str(), slopeText(record.l2Slope()).c_str(),
                slopeText(record.energySlope()).c_str());
    if (!plot_prefix.empty()) {
      const std::string path = plot_prefix + "_" + methodName(method) + ".dat";
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot open " + path);
      writePlotData(out, record);
    }
  }
  return 0;
}

int cmdVerifyBasis(int kmax, double nu, const std::string& regime_name, int samples,
                   double h_fd) {
  const Regime regime =
      regime_name == "plane_strain" ? Regime::plane_strain : Regime::plane_stress;
  const MaterialModel material(1.0, nu, regime);
  std::vector<ModeIndex> ordering;
  for (int k = 1; k <= kmax; ++k)
    for (int J = 1; J <= 4; ++J) {
      if (J == 1 && k == 1) continue;
      ordering.push_back({J, k});
    }
  const TrefftzModeSet set(material, Point2::Zero(), 1.0, ordering);
  const VerificationReport report = verifyModeSet(set, samples, h_fd);
  std::printf("mode    equilibrium   consistency   status\n");
  for (const auto& mr : report.modes)
    std::printf("(%d,%d)   %11.3e   %11.3e   %s\n", mr.mode.J, mr.mode.k,
                mr.equilibrium_residual, mr.consistency_residual,
                mr.passed ? "pass" : "FAIL");
  if (!report.all_passed) {
    std::fprintf(stderr, "basis verification failed\n");
    return 2;
  }
  std::printf("all %zu modes pass\n", report.modes.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid Trefftz / conventional polygonal FEM toolkit for 2D elasticity"};
  app.require_subcommand(1);

  auto* mesh = app.add_subcommand("mesh", "generate a CVT polygonal mesh");
  std::string domain_spec, output = "mesh.poly";
  int cells = 0, lloyd = 100;
  std::uint64_t seed = 42;
  mesh->add_option("--domain", domain_spec, "rect:LxD | plate:side,r | annulus:ri,ro")
      ->required();
  mesh->add_option("--cells", cells, "number of cells")->required()
      ->check(CLI::PositiveNumber);
  mesh->add_option("--seed", seed, "RNG seed");
  mesh->add_option("--lloyd", lloyd, "Lloyd iterations")->check(CLI::NonNegativeNumber);
  mesh->add_option("-o,--output", output, "output mesh file");

  auto* run = app.add_subcommand("run", "solve one benchmark on one mesh");
  std::string benchmark, method = "ht", mesh_path, config_path, csv_path, dump_path;
  run->add_option("--benchmark", benchmark, "cantilever | plate_hole | circular_beam")
      ->required();
  run->add_option("--method", method)->check(CLI::IsMember({"ht", "pfem"}));
  run->add_option("--mesh", mesh_path, "polymesh file")->required();
  run->add_option("--config", config_path, "key=value overrides");
  run->add_option("--csv", csv_path, "append the result row to this file");
  run->add_option("--dump", dump_path, "write per-node displacements");

  auto* converge = app.add_subcommand("converge", "run a convergence study");
  std::string cv_benchmark, cv_method = "both", cv_config, cv_csv, cv_plot;
  std::vector<int> sizes;
  std::uint64_t cv_seed = 42;
  int cv_lloyd = 100;
  converge->add_option("--benchmark", cv_benchmark)->required();
  converge->add_option("--method", cv_method)->check(CLI::IsMember({"ht", "pfem", "both"}));
  converge->add_option("--sizes", sizes, "comma-separated mesh sizes")
      ->required()->delimiter(',')->check(CLI::PositiveNumber);
  converge->add_option("--seed", cv_seed, "RNG seed");
  converge->add_option("--lloyd", cv_lloyd, "Lloyd iterations");
  converge->add_option("--config", cv_config, "key=value overrides");
  converge->add_option("--csv", cv_csv, "CSV output file");
  converge->add_option("--plot", cv_plot, "plot-data file prefix");

  auto* verify = app.add_subcommand("verify-basis", "finite-difference mode checks");
  int kmax = 6, samples = 64;
  double nu = 0.25, h_fd = 1e-5;
  std::string regime = "plane_stress";
  verify->add_option("--kmax", kmax)->check(CLI::Range(1, 12));
  verify->add_option("--nu", nu)->check(CLI::Range(0.0, 0.4999));
  verify->add_option("--regime", regime)
      ->check(CLI::IsMember({"plane_stress", "plane_strain"}));
  verify->add_option("--samples", samples)->check(CLI::PositiveNumber);
  verify->add_option("--hfd", h_fd)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (mesh->parsed()) return cmdMesh(domain_spec, cells, seed, lloyd, output);
    if (run->parsed())
      return cmdRun(benchmark, method, mesh_path, config_path, csv_path, dump_path);
    if (converge->parsed())
      return cmdConverge(cv_benchmark, cv_method, sizes, cv_seed, cv_lloyd, cv_config,
                         cv_csv, cv_plot);
    if (verify->parsed()) return cmdVerifyBasis(kmax, nu, regime, samples, h_fd);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  }
  return 1;
}
