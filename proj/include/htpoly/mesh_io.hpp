#pragma once

#include "htpoly/geometry.hpp"

#include <iosfwd>
#include <string>

namespace htpoly {

/// Line-oriented plain-text mesh format:
///   polymesh 1
///   nodes N        followed by N lines "<index> <x> <y>"
///   cells E        followed by E lines "<index> <k> <v_0> ... <v_{k-1}>"
///   boundary B     followed by B lines "<node_a> <node_b> <marker>"
/// '#' starts a comment; indices are 0-based; cells are CCW.
void writeMesh(const PolygonMesh& mesh, std::ostream& out);
void writeMesh(const PolygonMesh& mesh, const std::string& path);

/// Parse and validate. Malformed input raises std::runtime_error naming the
/// offending line; CW or non-convex cells are rejected, not fixed.
PolygonMesh readMesh(std::istream& in);
PolygonMesh readMesh(const std::string& path);

}  // namespace htpoly
