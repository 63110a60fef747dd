#include "htpoly/mesh_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace htpoly {

namespace {

[[noreturn]] void parseError(int line, const std::string& what) {
  throw std::runtime_error("mesh parse error at line " + std::to_string(line) + ": " + what);
}

// Next non-empty, non-comment line; returns false at EOF.
bool nextLine(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto pos = line.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) continue;
    return true;
  }
  return false;
}

}  // namespace

void writeMesh(const PolygonMesh& mesh, std::ostream& out) {
  out << "polymesh 1\n";
  out << "nodes " << mesh.nodes.size() << "\n";
  char buf[96];
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i, mesh.nodes[i].x(),
                  mesh.nodes[i].y());
    out << buf;
  }
  out << "cells " << mesh.cells.size() << "\n";
  for (size_t c = 0; c < mesh.cells.size(); ++c) {
    out << c << " " << mesh.cells[c].size();
    for (int idx : mesh.cells[c]) out << " " << idx;
    out << "\n";
  }
  out << "boundary " << mesh.boundary_edges.size() << "\n";
  for (const auto& be : mesh.boundary_edges)
    out << be.a << " " << be.b << " " << be.marker << "\n";
}

void writeMesh(const PolygonMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  writeMesh(mesh, out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

PolygonMesh readMesh(std::istream& in) {
  PolygonMesh mesh;
  std::string line;
  int lineno = 0;

  if (!nextLine(in, line, lineno)) parseError(lineno, "empty file");
  {
    std::istringstream ss(line);
    std::string tag;
    int version = 0;
    if (!(ss >> tag >> version) || tag != "polymesh" || version != 1)
      parseError(lineno, "expected header 'polymesh 1'");
  }

  auto readCount = [&](const char* keyword) {
    if (!nextLine(in, line, lineno))
      parseError(lineno, std::string("expected '") + keyword + " <count>'");
    std::istringstream ss(line);
    std::string tag;
    long count = -1;
    if (!(ss >> tag >> count) || tag != keyword || count < 0)
      parseError(lineno, std::string("expected '") + keyword + " <count>'");
    return count;
  };

  const long n_nodes = readCount("nodes");
  mesh.nodes.resize(n_nodes);
  for (long i = 0; i < n_nodes; ++i) {
    if (!nextLine(in, line, lineno)) parseError(lineno, "unexpected end of node list");
    std::istringstream ss(line);
    long idx;
    double x, y;
    if (!(ss >> idx >> x >> y)) parseError(lineno, "malformed node line");
    if (idx != i) parseError(lineno, "node indices must be 0-based and sequential");
    if (!std::isfinite(x) || !std::isfinite(y)) parseError(lineno, "non-finite coordinate");
    mesh.nodes[i] = Point2(x, y);
  }

  const long n_cells = readCount("cells");
  mesh.cells.resize(n_cells);
  for (long c = 0; c < n_cells; ++c) {
    if (!nextLine(in, line, lineno)) parseError(lineno, "unexpected end of cell list");
    std::istringstream ss(line);
    long idx, k;
    if (!(ss >> idx >> k)) parseError(lineno, "malformed cell line");
    if (idx != c) parseError(lineno, "cell indices must be 0-based and sequential");
    if (k < 3) parseError(lineno, "cell " + std::to_string(c) + " has fewer than 3 vertices");
    mesh.cells[c].resize(k);
    for (long j = 0; j < k; ++j) {
      if (!(ss >> mesh.cells[c][j])) parseError(lineno, "malformed cell line");
      if (mesh.cells[c][j] < 0 || mesh.cells[c][j] >= n_nodes)
        parseError(lineno, "cell " + std::to_string(c) + " references node index " +
                               std::to_string(mesh.cells[c][j]) + " out of range");
    }
  }

  const long n_boundary = readCount("boundary");
  mesh.boundary_edges.resize(n_boundary);
  for (long b = 0; b < n_boundary; ++b) {
    if (!nextLine(in, line, lineno)) parseError(lineno, "unexpected end of boundary list");
    std::istringstream ss(line);
    auto& be = mesh.boundary_edges[b];
    if (!(ss >> be.a >> be.b >> be.marker)) parseError(lineno, "malformed boundary line");
    if (be.a < 0 || be.a >= n_nodes || be.b < 0 || be.b >= n_nodes)
      parseError(lineno, "boundary edge references node index out of range");
  }

  mesh.validate();
  return mesh;
}

PolygonMesh readMesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return readMesh(in);
}

}  // namespace htpoly
