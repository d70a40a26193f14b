#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fibersurf/jacobi.hpp"
#include "fibersurf/mesh.hpp"
#include "fibersurf/range_geom.hpp"
#include "fibersurf/search.hpp"

namespace fstest {

using namespace fibersurf;

// n^3 grid on [-1, 1]^3 with values from fn(x, y, z).
Dataset grid_dataset(std::size_t n, const std::function<RangePoint(double, double, double)>& fn);

Dataset single_tet(std::array<RangePoint, 4> values);

// Link of (lo, hi) re-derived by scanning every tet of the mesh.
struct BruteLink {
  std::vector<VertexId> vertices;  // ascending
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<TetId> tets;  // ascending
};
BruteLink brute_link(const TetMesh& mesh, VertexId lo, VertexId hi);

struct BruteClass {
  EdgeKind kind;
  std::size_t n_lower;
  std::size_t n_upper;
  int lower_cc;
  int upper_cc;
};
// Independent classification: brute-force link, union-find per side.
BruteClass brute_classify(const TetMesh& mesh, const BivariateField& field, VertexId lo, VertexId hi);

// Euclidean distance from p to the closed segment [u, v].
double segment_distance(RangePoint p, const ControlEdge& e);

// Random control edges with both endpoints in the range rectangle whose
// segment meets the image of at least one tet.
std::vector<ControlEdge> support_edges(const Dataset& ds, std::size_t count, std::uint64_t seed);

// True when the tets are face-connected.
bool face_connected(const TetMesh& mesh, const std::vector<TetId>& tets);

// Members of one component of a canonical TetSet.
std::vector<TetId> component_members(const TetSet& s, std::uint32_t label);

std::string temp_path(const std::string& name);
std::string read_file(const std::string& path);

}  // namespace fstest
